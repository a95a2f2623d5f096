//! Finite models of graded `F_2[U]`-modules: truncated towers, reduced
//! summands carrying a Z/2 parity, and U-equivariant block maps between them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{BitMatrix, BitVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("a reduced summand needs rank >= 1 and u_order >= 1")]
    EmptySummand,
    #[error("image index {index} is not killed by U^{u_order}")]
    ImageTooDeep { index: usize, u_order: usize },
    #[error("map mixes Z/2 gradings: source basis {source_index} ({source_parity}) hits target basis {target_index} ({target_parity})")]
    Inhomogeneous {
        source_index: usize,
        source_parity: Parity,
        target_index: usize,
        target_parity: Parity,
    },
    #[error("source depth {source_depth} exceeds target depth {target_depth} plus the power {power}")]
    DepthMismatch { source_depth: usize, target_depth: usize, power: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn flipped_if(self, cond: bool) -> Self {
        if cond {
            self.flip()
        } else {
            self
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// `span(e_0, ..., e_{N-1})` with `U e_j = e_{j-1}` and `U e_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedTower {
    pub depth: usize,
    pub parity: Parity,
}

impl TruncatedTower {
    pub fn even(depth: usize) -> Self {
        Self { depth, parity: Parity::Even }
    }
}

/// An element of a tower, as the set of basis indices with coefficient 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TowerElement(Vec<usize>);

impl TowerElement {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut out = Self::zero();
        for i in indices {
            out.toggle(i);
        }
        out
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    fn toggle(&mut self, i: usize) {
        match self.0.binary_search(&i) {
            Ok(pos) => {
                self.0.remove(pos);
            }
            Err(pos) => self.0.insert(pos, i),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &i in &other.0 {
            out.toggle(i);
        }
        out
    }

    /// `U^n` applied to this element.
    pub fn lower(&self, n: u64) -> Self {
        let n = n as usize;
        Self(self.0.iter().filter(|&&i| i >= n).map(|&i| i - n).collect())
    }

    /// The canonical `U^{-n}` lift: `e_j -> e_{j+n}`.
    pub fn raise(&self, n: u64) -> Self {
        Self(self.0.iter().map(|&i| i + n as usize).collect())
    }
}

/// `rank` copies of `F_2[U]/U^{u_order}` in a single parity, together with
/// the images of the top generator under the vertical and horizontal maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedSummand {
    pub rank: usize,
    pub parity: Parity,
    pub u_order: usize,
    #[serde(default)]
    pub v_image: TowerElement,
    #[serde(default)]
    pub h_image: TowerElement,
}

impl ReducedSummand {
    pub fn new(rank: usize, parity: Parity, u_order: usize) -> Self {
        Self { rank, parity, u_order, v_image: TowerElement::zero(), h_image: TowerElement::zero() }
    }

    pub fn dimension(&self) -> usize {
        self.rank * self.u_order
    }

    pub fn check(&self) -> Result<(), GradedError> {
        if self.rank == 0 || self.u_order == 0 {
            return Err(GradedError::EmptySummand);
        }
        for image in [&self.v_image, &self.h_image] {
            if let Some(index) = image.max_index() {
                if index >= self.u_order {
                    return Err(GradedError::ImageTooDeep { index, u_order: self.u_order });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    Tower,
    Reduced,
}

/// One cyclic summand `F_2[U]/U^len` of a module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub kind: PieceKind,
    /// Index of the block (the `s` coordinate in a mapping cone) holding the piece.
    pub block: i64,
    pub len: usize,
    pub parity: Parity,
}

/// A finite direct sum of cyclic `F_2[U]`-modules with a fixed basis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedModule {
    pieces: Vec<Piece>,
    offsets: Vec<usize>,
    dim: usize,
}

impl GradedModule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tower(tower: TruncatedTower) -> Self {
        let mut m = Self::new();
        m.push(Piece { kind: PieceKind::Tower, block: 0, len: tower.depth, parity: tower.parity });
        m
    }

    /// Appends a piece and returns its index.
    pub fn push(&mut self, piece: Piece) -> usize {
        self.offsets.push(self.dim);
        self.dim += piece.len;
        self.pieces.push(piece);
        self.pieces.len() - 1
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis index of `e_j` in piece `piece`.
    pub fn basis_index(&self, piece: usize, j: usize) -> usize {
        debug_assert!(j < self.pieces[piece].len);
        self.offsets[piece] + j
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.pieces.iter().flat_map(|p| std::iter::repeat(p.parity).take(p.len)).collect()
    }

    /// Matrix of the U action in this basis.
    pub fn u_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.dim, self.dim);
        for (idx, piece) in self.pieces.iter().enumerate() {
            for j in 1..piece.len {
                m.set(self.basis_index(idx, j - 1), self.basis_index(idx, j), true);
            }
        }
        m
    }
}

/// A linear map between two modules; rows index the target basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    pub source: GradedModule,
    pub target: GradedModule,
    pub matrix: BitMatrix,
}

impl BlockMap {
    pub fn zero(source: GradedModule, target: GradedModule) -> Self {
        let matrix = BitMatrix::zeros(target.dim(), source.dim());
        Self { source, target, matrix }
    }

    /// Checks `M U_source = U_target M` exactly.
    pub fn is_u_equivariant(&self) -> bool {
        self.matrix.mul(&self.source.u_matrix()) == self.target.u_matrix().mul(&self.matrix)
    }

    pub fn compose(&self, after: &BlockMap) -> BlockMap {
        assert_eq!(self.target, after.source, "modules do not match");
        BlockMap {
            source: self.source.clone(),
            target: after.target.clone(),
            matrix: after.matrix.mul(&self.matrix),
        }
    }

    /// Fails with the first matrix entry joining basis elements of different parity.
    pub fn check_homogeneous(&self) -> Result<(), GradedError> {
        let sp = self.source.parities();
        let tp = self.target.parities();
        for r in 0..self.matrix.rows() {
            for c in self.matrix.row(r).ones() {
                if sp[c] != tp[r] {
                    return Err(GradedError::Inhomogeneous {
                        source_index: c,
                        source_parity: sp[c],
                        target_index: r,
                        target_parity: tp[r],
                    });
                }
            }
        }
        Ok(())
    }
}

/// `e_j -> e_{j-n}`, and zero when `j < n`.
pub fn tower_power_map(
    source: TruncatedTower,
    target: TruncatedTower,
    n: usize,
) -> Result<BlockMap, GradedError> {
    if source.depth > target.depth + n {
        return Err(GradedError::DepthMismatch {
            source_depth: source.depth,
            target_depth: target.depth,
            power: n,
        });
    }
    let matrix = BitMatrix::from_fn(target.depth, source.depth, |r, c| c >= n && c - n == r);
    Ok(BlockMap {
        source: GradedModule::from_tower(source),
        target: GradedModule::from_tower(target),
        matrix,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCokernel {
    /// Kernel basis vectors (in source coordinates) with their parity.
    pub kernel: Vec<(BitVec, Parity)>,
    /// Target basis indices spanning a complement of the image, with parity.
    pub cokernel: Vec<(usize, Parity)>,
}

impl KernelCokernel {
    pub fn kernel_dim(&self, parity: Parity) -> usize {
        self.kernel.iter().filter(|(_, p)| *p == parity).count()
    }

    pub fn cokernel_dim(&self, parity: Parity) -> usize {
        self.cokernel.iter().filter(|(_, p)| *p == parity).count()
    }
}

/// Exact kernel and cokernel bases of a grading-homogeneous map.
///
/// The map is split into its even and odd parts, which are reduced separately
/// so every basis vector returned carries a single parity.
pub fn f2_kernel_cokernel(map: &BlockMap) -> Result<KernelCokernel, GradedError> {
    map.check_homogeneous()?;
    let sp = map.source.parities();
    let tp = map.target.parities();
    let mut out = KernelCokernel { kernel: Vec::new(), cokernel: Vec::new() };
    for parity in [Parity::Even, Parity::Odd] {
        let cols: Vec<usize> = (0..sp.len()).filter(|&c| sp[c] == parity).collect();
        let rows: Vec<usize> = (0..tp.len()).filter(|&r| tp[r] == parity).collect();
        let sub = BitMatrix::from_fn(rows.len(), cols.len(), |r, c| map.matrix.get(rows[r], cols[c]));
        for v in sub.kernel() {
            let mut full = BitVec::zeros(sp.len());
            for i in v.ones() {
                full.set(cols[i], true);
            }
            out.kernel.push((full, parity));
        }
        out.cokernel.extend(sub.cokernel_coordinates().into_iter().map(|r| (rows[r], parity)));
    }
    Ok(out)
}

/// Kernel and cokernel dimensions of a homogeneous map, split by parity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ParityRanks {
    pub kernel_even: usize,
    pub kernel_odd: usize,
    pub cokernel_even: usize,
    pub cokernel_odd: usize,
}

/// Same dimensions as [`f2_kernel_cokernel`] but without building bases.
pub fn parity_ranks(map: &BlockMap) -> Result<ParityRanks, GradedError> {
    map.check_homogeneous()?;
    let sp = map.source.parities();
    let tp = map.target.parities();
    let mut out = ParityRanks::default();
    for parity in [Parity::Even, Parity::Odd] {
        let cols: Vec<usize> = (0..sp.len()).filter(|&c| sp[c] == parity).collect();
        let rows: Vec<usize> = (0..tp.len()).filter(|&r| tp[r] == parity).collect();
        let sub = BitMatrix::from_fn(rows.len(), cols.len(), |r, c| map.matrix.get(rows[r], cols[c]));
        let rank = sub.rank();
        let (kernel, cokernel) = (cols.len() - rank, rows.len() - rank);
        match parity {
            Parity::Even => (out.kernel_even, out.cokernel_even) = (kernel, cokernel),
            Parity::Odd => (out.kernel_odd, out.cokernel_odd) = (kernel, cokernel),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn power_map_examples() {
        let t3 = TruncatedTower::even(3);
        let id = tower_power_map(t3, t3, 0).unwrap();
        assert_eq!(id.matrix, BitMatrix::identity(3));
        let kc = f2_kernel_cokernel(&id).unwrap();
        assert!(kc.kernel.is_empty() && kc.cokernel.is_empty());

        let shift = tower_power_map(t3, t3, 1).unwrap();
        assert_eq!(shift.matrix.rank(), 2);
        let kc = f2_kernel_cokernel(&shift).unwrap();
        assert_eq!(kc.kernel.len(), 1);
        assert_eq!(kc.kernel[0].0, BitVec::unit(3, 0));
        assert_eq!(kc.cokernel, vec![(2, Parity::Even)]);

        let zero = tower_power_map(t3, t3, 5).unwrap();
        assert!(zero.matrix.is_zero());
    }

    #[test]
    fn zero_map_on_depth_two() {
        let t2 = TruncatedTower::even(2);
        let kc = f2_kernel_cokernel(&tower_power_map(t2, t2, 2).unwrap()).unwrap();
        assert_eq!(kc.kernel.len(), 2);
        assert_eq!(kc.cokernel.len(), 2);
    }

    #[test]
    fn depth_mismatch_rejected() {
        let r = tower_power_map(TruncatedTower::even(5), TruncatedTower::even(2), 1);
        assert!(matches!(r, Err(GradedError::DepthMismatch { .. })));
    }

    #[test]
    fn inhomogeneous_map_rejected() {
        let src = TruncatedTower { depth: 2, parity: Parity::Odd };
        let map = tower_power_map(src, TruncatedTower::even(2), 0).unwrap();
        assert!(matches!(f2_kernel_cokernel(&map), Err(GradedError::Inhomogeneous { .. })));
    }

    #[test]
    fn parity_split_kernel() {
        let mut src = GradedModule::new();
        src.push(Piece { kind: PieceKind::Tower, block: 0, len: 3, parity: Parity::Even });
        src.push(Piece { kind: PieceKind::Reduced, block: 0, len: 2, parity: Parity::Odd });
        let tgt = GradedModule::from_tower(TruncatedTower::even(3));
        let mut map = BlockMap::zero(src, tgt);
        for j in 0..3 {
            map.matrix.set(j, j, true);
        }
        assert!(map.is_u_equivariant());
        let kc = f2_kernel_cokernel(&map).unwrap();
        assert_eq!(kc.kernel_dim(Parity::Even), 0);
        assert_eq!(kc.kernel_dim(Parity::Odd), 2);
        let ranks = parity_ranks(&map).unwrap();
        assert_eq!((ranks.kernel_even, ranks.kernel_odd), (0, 2));
        assert_eq!((ranks.cokernel_even, ranks.cokernel_odd), (0, 0));
    }

    #[test]
    fn summand_checks() {
        let mut s = ReducedSummand::new(1, Parity::Even, 2);
        assert!(s.check().is_ok());
        s.v_image = TowerElement::from_indices([2]);
        assert!(matches!(s.check(), Err(GradedError::ImageTooDeep { index: 2, u_order: 2 })));
        assert_eq!(ReducedSummand::new(0, Parity::Even, 1).check(), Err(GradedError::EmptySummand));
    }

    #[test]
    fn tower_element_arithmetic() {
        let a = TowerElement::from_indices([0, 3, 5]);
        assert_eq!(a.lower(3), TowerElement::from_indices([0, 2]));
        assert_eq!(a.raise(1), TowerElement::from_indices([1, 4, 6]));
        assert!(a.add(&a).is_zero());
    }

    proptest! {
        #[test]
        fn power_map_ranks(depth in 1usize..12, n in 0usize..16) {
            let t = TruncatedTower::even(depth);
            let map = tower_power_map(t, t, n).unwrap();
            prop_assert!(map.is_u_equivariant());
            let kc = f2_kernel_cokernel(&map).unwrap();
            prop_assert_eq!(kc.kernel.len(), n.min(depth));
            prop_assert_eq!(kc.cokernel.len(), n.min(depth));
        }

        #[test]
        fn compositions_stay_equivariant(depth in 1usize..10, a in 0usize..6, b in 0usize..6) {
            let t = TruncatedTower::even(depth);
            let f = tower_power_map(t, t, a).unwrap();
            let g = tower_power_map(t, t, b).unwrap();
            let fg = f.compose(&g);
            prop_assert!(fg.is_u_equivariant());
            prop_assert_eq!(fg.matrix, tower_power_map(t, t, a + b).unwrap().matrix);
        }
    }
}
