//! Multi-matrix algebras `M_{n_1} ⊕ … ⊕ M_{n_k}`, their elements, and the
//! functionals that pair with them.
//!
//! Coordinates follow the matrix-unit basis ordered block-major and then
//! row-major inside each block. Elements carry operator-norm semantics
//! (max over blocks of the largest singular value) and functionals carry
//! trace-norm semantics (sum over blocks of all singular values). The pairing
//! `⟨b, a⟩ = Σ_i tr(b_i a_i)` is bilinear with no conjugation, which makes the
//! trace norm exactly the dual of the operator norm.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::CMatrix;

/// Relative threshold below which singular values count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// One matrix unit `E^{(block)}_{row,col}` of a multi-matrix algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatrixUnit {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

/// Ordered list of block sizes. The empty list is the zero algebra `O`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockStructure {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if let Some((index, _)) = sizes.iter().enumerate().find(|(_, &n)| n == 0) {
            return Err(Error::NonPositiveBlockSize { index, size: 0 });
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &n in &sizes {
            offsets.push(acc);
            acc += n * n;
        }
        Ok(Self { sizes, offsets })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    /// `Σ n_i²`.
    pub fn dim(&self) -> usize {
        self.sizes.iter().map(|n| n * n).sum()
    }

    /// Coordinate offset of the first matrix unit of `block`.
    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn coordinate(&self, unit: MatrixUnit) -> usize {
        self.offsets[unit.block] + unit.row * self.sizes[unit.block] + unit.col
    }

    pub fn matrix_unit(&self, coordinate: usize) -> MatrixUnit {
        let block = match self.offsets.binary_search(&coordinate) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        let n = self.sizes[block];
        let local = coordinate - self.offsets[block];
        MatrixUnit {
            block,
            row: local / n,
            col: local % n,
        }
    }

    /// Index of the transposed matrix unit, used to express the bilinear
    /// pairing in coordinates.
    pub fn transpose_coordinate(&self, coordinate: usize) -> usize {
        let u = self.matrix_unit(coordinate);
        self.coordinate(MatrixUnit {
            block: u.block,
            row: u.col,
            col: u.row,
        })
    }
}

/// A finite-dimensional W*-algebra given by its block structure, with its unit.
#[derive(Clone, Debug, PartialEq)]
pub struct WStarAlgebra {
    structure: BlockStructure,
    unit: AlgebraElement,
}

/// Builds an algebra from signed sizes, rejecting any size `≤ 0`.
pub fn make_algebra(sizes: &[i64]) -> Result<WStarAlgebra> {
    let mut checked = Vec::with_capacity(sizes.len());
    for (index, &size) in sizes.iter().enumerate() {
        if size <= 0 {
            return Err(Error::NonPositiveBlockSize { index, size });
        }
        checked.push(size as usize);
    }
    WStarAlgebra::from_sizes(&checked)
}

impl WStarAlgebra {
    pub fn new(structure: BlockStructure) -> Self {
        let unit = AlgebraElement::from_blocks(
            structure
                .sizes()
                .iter()
                .map(|&n| CMatrix::identity(n, n))
                .collect(),
        );
        Self { structure, unit }
    }

    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        Ok(Self::new(BlockStructure::new(sizes.to_vec())?))
    }

    /// The zero algebra `O = {0}`.
    pub fn zero_algebra() -> Self {
        Self::new(BlockStructure::new(Vec::new()).expect("empty structure"))
    }

    /// The unit object `ℂ = M_1`.
    pub fn complex() -> Self {
        Self::new(BlockStructure::new(vec![1]).expect("valid structure"))
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn sizes(&self) -> &[usize] {
        self.structure.sizes()
    }

    pub fn num_blocks(&self) -> usize {
        self.structure.num_blocks()
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn is_zero_algebra(&self) -> bool {
        self.structure.num_blocks() == 0
    }

    pub fn unit(&self) -> &AlgebraElement {
        &self.unit
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::from_blocks(self.sizes().iter().map(|&n| CMatrix::zeros(n, n)).collect())
    }

    /// Matrix unit with coordinate index `p`.
    pub fn basis_element(&self, p: usize) -> AlgebraElement {
        let u = self.structure.matrix_unit(p);
        self.matrix_unit(u.block, u.row, u.col)
    }

    pub fn matrix_unit(&self, block: usize, row: usize, col: usize) -> AlgebraElement {
        let mut x = self.zero();
        x.blocks[block][(row, col)] = Complex64::new(1.0, 0.0);
        x
    }

    /// Unit of a single block, zero elsewhere.
    pub fn block_unit(&self, block: usize) -> AlgebraElement {
        let mut x = self.zero();
        x.blocks[block] = CMatrix::identity(self.sizes()[block], self.sizes()[block]);
        x
    }

    pub fn element_from_coords(&self, coords: &DVector<Complex64>) -> Result<AlgebraElement> {
        Ok(AlgebraElement::from_blocks(self.blocks_from_coords(coords)?))
    }

    pub fn functional_from_coords(&self, coords: &DVector<Complex64>) -> Result<Functional> {
        Ok(Functional::from_blocks(self.blocks_from_coords(coords)?))
    }

    fn blocks_from_coords(&self, coords: &DVector<Complex64>) -> Result<Vec<CMatrix>> {
        if coords.len() != self.dim() {
            return Err(Error::StructureMismatch(format!(
                "coordinate vector of length {} for algebra of dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        Ok(self
            .sizes()
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let off = self.structure.offset(b);
                CMatrix::from_fn(n, n, |r, c| coords[off + r * n + c])
            })
            .collect())
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        x.blocks.len() == self.num_blocks()
            && x.blocks.iter().zip(self.sizes()).all(|(m, &n)| m.nrows() == n && m.ncols() == n)
    }

    pub fn check_element(&self, x: &AlgebraElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::StructureMismatch(format!(
                "element with block shape {:?} is not in algebra {:?}",
                x.shape(),
                self.sizes()
            )))
        }
    }

    pub fn check_functional(&self, b: &Functional) -> Result<()> {
        if b.shape() == self.sizes() {
            Ok(())
        } else {
            Err(Error::StructureMismatch(format!(
                "functional with block shape {:?} is not on algebra {:?}",
                b.shape(),
                self.sizes()
            )))
        }
    }
}

fn same_shape(x: &[CMatrix], y: &[CMatrix]) -> Result<()> {
    let sx: Vec<usize> = x.iter().map(|m| m.nrows()).collect();
    let sy: Vec<usize> = y.iter().map(|m| m.nrows()).collect();
    if sx == sy {
        Ok(())
    } else {
        Err(Error::StructureMismatch(format!("block shapes {sx:?} and {sy:?} differ")))
    }
}

fn coords_of(blocks: &[CMatrix]) -> DVector<Complex64> {
    let dim = blocks.iter().map(|m| m.len()).sum();
    let mut v = DVector::zeros(dim);
    let mut k = 0;
    for m in blocks {
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                v[k] = m[(r, c)];
                k += 1;
            }
        }
    }
    v
}

fn singular_values(m: &CMatrix) -> DVector<f64> {
    if m.is_empty() {
        return DVector::zeros(0);
    }
    m.singular_values()
}

/// Number of singular values above `RANK_TOL` times the largest one.
pub fn numerical_rank(m: &CMatrix) -> usize {
    let sv = singular_values(m);
    rank_above(&sv, sv.iter().cloned().fold(0.0, f64::max))
}

/// Rank of `m` measured against an external scale (for example the largest
/// singular value of the whole element `m` is a block of).
pub fn rank_against(m: &CMatrix, scale: f64) -> usize {
    rank_above(&singular_values(m), scale)
}

fn rank_above(sv: &DVector<f64>, scale: f64) -> usize {
    if scale <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * scale).count()
}

/// An element `(a_1, …, a_k)` of a multi-matrix algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Self {
        Self { blocks }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.blocks.iter().map(|m| m.nrows()).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_shape(&self.blocks, &other.blocks)?;
        Ok(Self::from_blocks(self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_shape(&self.blocks, &other.blocks)?;
        Ok(Self::from_blocks(self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_shape(&self.blocks, &other.blocks)?;
        Ok(Self::from_blocks(self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_blocks(self.blocks.iter().map(|a| a * c).collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_blocks(self.blocks.iter().map(|a| a.adjoint()).collect())
    }

    /// `xy − yx`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn coords(&self) -> DVector<Complex64> {
        coords_of(&self.blocks)
    }

    /// Max over blocks of the largest singular value; 0 on the zero algebra.
    pub fn op_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| singular_values(m).iter().cloned().fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Max over blocks of the Frobenius norm. Never smaller than `op_norm`,
    /// and far cheaper; used as the residual measure in basis-level checks.
    pub fn block_frobenius(&self) -> f64 {
        self.blocks.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    /// The same blocks viewed as a functional.
    pub fn to_functional(&self) -> Functional {
        Functional::from_blocks(self.blocks.clone())
    }

    /// Functional `b` with `tr_norm(b) = 1` and `⟨b, self⟩ = op_norm(self)`:
    /// the rank-one `v u*` built from the top singular pair of the block that
    /// carries the norm. Zero for the zero element.
    pub fn norming_functional(&self) -> Functional {
        let mut out: Vec<CMatrix> = self.blocks.iter().map(|m| CMatrix::zeros(m.nrows(), m.ncols())).collect();
        let mut best: Option<(usize, f64)> = None;
        for (i, m) in self.blocks.iter().enumerate() {
            let s = singular_values(m).iter().cloned().fold(0.0, f64::max);
            if s > 0.0 && best.is_none_or(|(_, bs)| s > bs) {
                best = Some((i, s));
            }
        }
        if let Some((i, _)) = best {
            let svd = self.blocks[i].clone().svd(true, true);
            let u = svd.u.expect("u requested");
            let v_t = svd.v_t.expect("v_t requested");
            let k = svd
                .singular_values
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |acc, (j, &s)| if s > acc.1 { (j, s) } else { acc })
                .0;
            // tr(v u* x) = u* x v = σ_max
            let u_col = u.column(k).into_owned();
            let v_col = v_t.row(k).adjoint();
            out[i] = &v_col * u_col.adjoint();
        }
        Functional::from_blocks(out)
    }
}

/// A functional `φ_b(a) = Σ_i tr(b_i a_i)` on a multi-matrix algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    pub blocks: Vec<CMatrix>,
}

impl Functional {
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Self {
        Self { blocks }
    }

    pub fn zero_on(alg: &WStarAlgebra) -> Self {
        Self::from_blocks(alg.zero().blocks)
    }

    pub fn shape(&self) -> Vec<usize> {
        self.blocks.iter().map(|m| m.nrows()).collect()
    }

    pub fn coords(&self) -> DVector<Complex64> {
        coords_of(&self.blocks)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_shape(&self.blocks, &other.blocks)?;
        Ok(Self::from_blocks(self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_shape(&self.blocks, &other.blocks)?;
        Ok(Self::from_blocks(self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_blocks(self.blocks.iter().map(|a| a * c).collect())
    }

    /// Sum over blocks of the sum of singular values.
    pub fn tr_norm(&self) -> f64 {
        self.blocks.iter().map(|m| singular_values(m).sum()).sum()
    }

    pub fn pair(&self, a: &AlgebraElement) -> Result<Complex64> {
        same_shape(&self.blocks, &a.blocks)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, x) in self.blocks.iter().zip(&a.blocks) {
            let n = b.nrows();
            for r in 0..n {
                for c in 0..n {
                    acc += b[(r, c)] * x[(c, r)];
                }
            }
        }
        Ok(acc)
    }

    /// Contraction `a` (`op_norm(a) ≤ 1`) with `⟨self, a⟩ = tr_norm(self)`:
    /// per block `b_i = U Σ V*` gives `a_i = V U*`.
    pub fn maximizer(&self) -> AlgebraElement {
        AlgebraElement::from_blocks(
            self.blocks
                .iter()
                .map(|b| {
                    let svd = b.clone().svd(true, true);
                    let u = svd.u.expect("u requested");
                    let v_t = svd.v_t.expect("v_t requested");
                    (u * v_t).adjoint()
                })
                .collect(),
        )
    }

    /// The same blocks viewed as an algebra element.
    pub fn to_element(&self) -> AlgebraElement {
        AlgebraElement::from_blocks(self.blocks.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(alg: &WStarAlgebra, block: usize, values: &[f64]) -> AlgebraElement {
        let mut x = alg.zero();
        for (i, &v) in values.iter().enumerate() {
            x.blocks[block][(i, i)] = c(v, 0.0);
        }
        x
    }

    #[test]
    fn make_algebra_dimensions() {
        let a = make_algebra(&[2, 1]).unwrap();
        assert_eq!(a.dim(), 5);
        assert_eq!(a.unit().blocks[0], CMatrix::identity(2, 2));
        assert_eq!(a.unit().blocks[1], CMatrix::identity(1, 1));

        let o = make_algebra(&[]).unwrap();
        assert_eq!(o.dim(), 0);
        assert!(o.is_zero_algebra());
        assert_eq!(o.unit(), &o.zero());

        assert_eq!(make_algebra(&[3]).unwrap().dim(), 9);
    }

    #[test]
    fn non_positive_sizes_rejected() {
        assert_eq!(
            make_algebra(&[2, 0]),
            Err(Error::NonPositiveBlockSize { index: 1, size: 0 })
        );
        assert_eq!(
            make_algebra(&[-3]),
            Err(Error::NonPositiveBlockSize { index: 0, size: -3 })
        );
    }

    #[test]
    fn coordinates_round_trip_through_matrix_units() {
        let s = BlockStructure::new(vec![2, 3, 1]).unwrap();
        for p in 0..s.dim() {
            assert_eq!(s.coordinate(s.matrix_unit(p)), p);
            assert_eq!(s.transpose_coordinate(s.transpose_coordinate(p)), p);
        }
        assert_eq!(s.matrix_unit(4), MatrixUnit { block: 1, row: 0, col: 0 });
        assert_eq!(s.matrix_unit(13), MatrixUnit { block: 2, row: 0, col: 0 });
    }

    #[test]
    fn matrix_unit_arithmetic() {
        let m2 = make_algebra(&[2]).unwrap();
        let e11 = m2.matrix_unit(0, 0, 0);
        let e12 = m2.matrix_unit(0, 0, 1);
        let e21 = m2.matrix_unit(0, 1, 0);
        assert_eq!(e11.mul(&e12).unwrap(), e12);
        assert_eq!(e12.scale(c(0.0, 1.0)).adjoint(), e21.scale(c(0.0, -1.0)));

        let x = random::random_element(&m2, 3);
        assert_eq!(m2.unit().mul(&x).unwrap(), x);
        assert_eq!(x.mul(m2.unit()).unwrap(), x);
    }

    #[test]
    fn mismatched_structures_error() {
        let a = make_algebra(&[2]).unwrap();
        let b = make_algebra(&[1, 1]).unwrap();
        assert!(matches!(a.unit().mul(b.unit()), Err(Error::StructureMismatch(_))));
        assert!(matches!(a.unit().add(b.unit()), Err(Error::StructureMismatch(_))));
        assert!(matches!(
            a.unit().to_functional().pair(b.unit()),
            Err(Error::StructureMismatch(_))
        ));
    }

    #[test]
    fn unit_is_selfadjoint_idempotent_identity() {
        for sizes in [vec![], vec![1], vec![2, 1], vec![3, 2]] {
            let a = WStarAlgebra::from_sizes(&sizes).unwrap();
            let u = a.unit();
            assert_eq!(&u.adjoint(), u);
            assert_eq!(&u.mul(u).unwrap(), u);
        }
    }

    #[test]
    fn op_norm_examples() {
        let m2 = make_algebra(&[2]).unwrap();
        assert!((diag(&m2, 0, &[1.0, -2.0]).op_norm() - 2.0).abs() < 1e-14);

        let a = make_algebra(&[2, 1]).unwrap();
        let mut x = a.matrix_unit(0, 0, 1);
        x.blocks[1][(0, 0)] = c(3.0, 0.0);
        assert!((x.op_norm() - 3.0).abs() < 1e-14);

        let o = WStarAlgebra::zero_algebra();
        assert_eq!(o.unit().op_norm(), 0.0);
        assert_eq!(o.unit().to_functional().tr_norm(), 0.0);
    }

    #[test]
    fn tr_norm_examples() {
        let m2 = make_algebra(&[2]).unwrap();
        let b = diag(&m2, 0, &[1.0, -2.0]).to_functional();
        assert!((b.tr_norm() - 3.0).abs() < 1e-14);

        let a22 = make_algebra(&[2, 2]).unwrap();
        let b1 = random::random_functional(&m2, 1);
        let b2 = random::random_functional(&m2, 2);
        let both = Functional::from_blocks(vec![b1.blocks[0].clone(), b2.blocks[0].clone()]);
        a22.check_functional(&both).unwrap();
        assert!((both.tr_norm() - b1.tr_norm() - b2.tr_norm()).abs() < 1e-12);
    }

    #[test]
    fn pairing_examples() {
        let m2 = make_algebra(&[2]).unwrap();
        let e11 = m2.matrix_unit(0, 0, 0);
        assert_eq!(e11.to_functional().pair(&e11).unwrap(), c(1.0, 0.0));
        // bilinear: e_12 pairs with e_21, not with itself
        let e12 = m2.matrix_unit(0, 0, 1);
        let e21 = m2.matrix_unit(0, 1, 0);
        assert_eq!(e12.to_functional().pair(&e21).unwrap(), c(1.0, 0.0));
        assert_eq!(e12.to_functional().pair(&e12).unwrap(), c(0.0, 0.0));
        let b = random::random_functional(&m2, 9);
        assert_eq!(b.pair(&m2.zero()).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn maximizer_attains_trace_norm() {
        let a = make_algebra(&[3, 2, 1]).unwrap();
        for seed in 0..20 {
            let b = random::random_functional(&a, seed);
            let m = b.maximizer();
            assert!(m.op_norm() <= 1.0 + 1e-12);
            let p = b.pair(&m).unwrap();
            assert!((p.re - b.tr_norm()).abs() < 1e-9 * b.tr_norm());
            assert!(p.im.abs() < 1e-9 * b.tr_norm());
        }
    }

    #[test]
    fn norming_functional_attains_op_norm() {
        let a = make_algebra(&[3, 2]).unwrap();
        for seed in 0..20 {
            let x = random::random_element(&a, seed);
            let f = x.norming_functional();
            assert!((f.tr_norm() - 1.0).abs() < 1e-12);
            let p = f.pair(&x).unwrap();
            assert!((p.re - x.op_norm()).abs() < 1e-9 * x.op_norm());
            assert!(p.im.abs() < 1e-9 * x.op_norm());
        }
        let zero = a.zero();
        assert_eq!(zero.norming_functional().tr_norm(), 0.0);
    }

    #[test]
    fn rank_threshold() {
        let mut m = CMatrix::identity(3, 3);
        m[(2, 2)] = c(1e-12, 0.0);
        assert_eq!(numerical_rank(&m), 2);
        assert_eq!(numerical_rank(&CMatrix::zeros(2, 2)), 0);
        assert_eq!(rank_against(&CMatrix::zeros(2, 2), 1.0), 0);
    }
}
