//! Normal *-homomorphisms between multi-matrix algebras.
//!
//! At finite dimension every linear map is weak-* continuous, so normality is
//! automatic and never tested. A [`StarHom`] stores the dense coordinate
//! matrix of the map together with a `verified` flag that is only set by
//! construction from multiplicity data or by [`StarHom::verify`].

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{rank_against, AlgebraElement, WStarAlgebra};
use crate::error::{Error, Result};
use crate::random;
use crate::report::{CheckReport, Residual};
use crate::CMatrix;

/// Tolerance for the unitality flag, `‖f(𝟙) − 𝟙‖ ≤ UNITAL_TOL`.
pub const UNITAL_TOL: f64 = 1e-10;

/// Default tolerance for `verify`.
pub const VERIFY_TOL: f64 = 1e-10;

/// Integer multiplicity matrix, `counts[j][i]` copies of source block `i`
/// inside target block `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Counts(pub Vec<Vec<usize>>);

impl Counts {
    pub fn zeros(target_blocks: usize, source_blocks: usize) -> Self {
        Self(vec![vec![0; source_blocks]; target_blocks])
    }

    pub fn identity(blocks: usize) -> Self {
        Self((0..blocks).map(|j| (0..blocks).map(|i| usize::from(i == j)).collect()).collect())
    }

    /// Integer matrix product `self · inner`, the counts of `g ∘ f` when
    /// `self = c(g)` and `inner = c(f)`.
    pub fn compose(&self, inner: &Counts, inner_source_blocks: usize) -> Counts {
        Counts(
            self.0
                .iter()
                .map(|row| {
                    (0..inner_source_blocks)
                        .map(|i| row.iter().zip(&inner.0).map(|(&g, f)| g * f[i]).sum())
                        .collect()
                })
                .collect(),
        )
    }
}

/// Canonical data of a *-homomorphism: counts plus one unitary per target
/// block conjugating the standard block-diagonal embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityData {
    pub counts: Counts,
    pub unitaries: Vec<CMatrix>,
}

impl MultiplicityData {
    pub fn with_identity_unitaries(counts: Counts, target: &WStarAlgebra) -> Self {
        let unitaries = target.sizes().iter().map(|&m| CMatrix::identity(m, m)).collect();
        Self { counts, unitaries }
    }
}

/// A linear map between multi-matrix algebras on matrix-unit coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct StarHom {
    source: WStarAlgebra,
    target: WStarAlgebra,
    map: CMatrix,
    verified: bool,
    unital: bool,
}

impl StarHom {
    /// Unverified map from a `dim(target) × dim(source)` coordinate matrix.
    pub fn from_matrix(source: WStarAlgebra, target: WStarAlgebra, map: CMatrix) -> Result<Self> {
        if map.nrows() != target.dim() || map.ncols() != source.dim() {
            return Err(Error::StructureMismatch(format!(
                "map of shape {}x{} between algebras of dimension {} -> {}",
                map.nrows(),
                map.ncols(),
                source.dim(),
                target.dim()
            )));
        }
        let mut f = Self {
            source,
            target,
            map,
            verified: false,
            unital: false,
        };
        f.unital = f.compute_unital();
        Ok(f)
    }

    /// Unverified map given by the images of the matrix units.
    pub fn from_basis_images(
        source: WStarAlgebra,
        target: WStarAlgebra,
        image: impl Fn(usize) -> AlgebraElement,
    ) -> Result<Self> {
        let mut map = CMatrix::zeros(target.dim(), source.dim());
        for p in 0..source.dim() {
            let y = image(p);
            target.check_element(&y)?;
            map.set_column(p, &y.coords());
        }
        Self::from_matrix(source, target, map)
    }

    pub fn identity(alg: &WStarAlgebra) -> Self {
        let mut f = Self::from_matrix(alg.clone(), alg.clone(), CMatrix::identity(alg.dim(), alg.dim()))
            .expect("square identity");
        f.verified = true;
        f
    }

    /// The zero morphism `A → O → B`.
    pub fn zero_hom(source: &WStarAlgebra, target: &WStarAlgebra) -> Self {
        let mut f = Self::from_matrix(source.clone(), target.clone(), CMatrix::zeros(target.dim(), source.dim()))
            .expect("shape by construction");
        f.verified = true;
        f
    }

    /// Realizes counts and unitaries: block `j` of the image is
    /// `W_j [⊕_i a_i^{⊕ c[j][i]} ⊕ 0] W_j*`, copies ascending in `i` and the
    /// zero padding last.
    pub fn from_multiplicity(source: &WStarAlgebra, target: &WStarAlgebra, data: &MultiplicityData) -> Result<Self> {
        let counts = &data.counts.0;
        if counts.len() != target.num_blocks() || counts.iter().any(|row| row.len() != source.num_blocks()) {
            return Err(Error::StructureMismatch(format!(
                "count matrix must be {}x{}",
                target.num_blocks(),
                source.num_blocks()
            )));
        }
        if data.unitaries.len() != target.num_blocks() {
            return Err(Error::StructureMismatch(format!(
                "{} unitaries supplied for {} target blocks",
                data.unitaries.len(),
                target.num_blocks()
            )));
        }
        for (j, (row, &m)) in counts.iter().zip(target.sizes()).enumerate() {
            let needed: usize = row.iter().zip(source.sizes()).map(|(c, n)| c * n).sum();
            if needed > m {
                return Err(Error::MultiplicityOverflow {
                    block: j,
                    needed,
                    available: m,
                });
            }
            let w = &data.unitaries[j];
            if w.nrows() != m || w.ncols() != m {
                return Err(Error::StructureMismatch(format!(
                    "unitary for target block {j} is {}x{}, expected {m}x{m}",
                    w.nrows(),
                    w.ncols()
                )));
            }
            let deviation = (w.adjoint() * w - CMatrix::identity(m, m)).norm();
            if deviation > 1e-10 {
                return Err(Error::NotUnitary { block: j, deviation });
            }
        }

        let s = source.structure();
        let mut map = CMatrix::zeros(target.dim(), source.dim());
        for p in 0..source.dim() {
            let u = s.matrix_unit(p);
            let n = source.sizes()[u.block];
            let mut col = DVector::<Complex64>::zeros(target.dim());
            for (j, &m) in target.sizes().iter().enumerate() {
                let w = &data.unitaries[j];
                let start: usize = (0..u.block).map(|i| counts[j][i] * source.sizes()[i]).sum();
                let off = target.structure().offset(j);
                for k in 0..counts[j][u.block] {
                    let base = start + k * n;
                    // W E_{base+r, base+c} W* = w[:, base+r] w[:, base+c]*
                    for r in 0..m {
                        let wr = w[(r, base + u.row)];
                        if wr == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for c in 0..m {
                            col[off + r * m + c] += wr * w[(c, base + u.col)].conj();
                        }
                    }
                }
            }
            map.set_column(p, &col);
        }
        let mut f = Self::from_matrix(source.clone(), target.clone(), map)?;
        f.verified = true;
        Ok(f)
    }

    pub fn source(&self) -> &WStarAlgebra {
        &self.source
    }

    pub fn target(&self) -> &WStarAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.map
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// `f(𝟙_A) = 𝟙_B` within [`UNITAL_TOL`].
    pub fn is_unital(&self) -> bool {
        self.unital
    }

    fn compute_unital(&self) -> bool {
        let image = self.target.element_from_coords(&(&self.map * self.source.unit().coords()));
        match image.and_then(|y| y.sub(self.target.unit())) {
            Ok(d) => d.block_frobenius() <= UNITAL_TOL,
            Err(_) => false,
        }
    }

    pub(crate) fn mark_verified(mut self, verified: bool) -> Self {
        self.verified = verified;
        self
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.source.check_element(x)?;
        self.target.element_from_coords(&(&self.map * x.coords()))
    }

    /// Image of the matrix unit with coordinate `p`.
    pub fn basis_image(&self, p: usize) -> AlgebraElement {
        self.target
            .element_from_coords(&self.map.column(p).into_owned())
            .expect("column length matches target")
    }

    pub fn basis_images(&self) -> Vec<AlgebraElement> {
        (0..self.source.dim()).map(|p| self.basis_image(p)).collect()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &StarHom) -> Result<StarHom> {
        compose(self, inner)
    }

    /// Largest block-Frobenius distance between basis images.
    pub fn distance(&self, other: &StarHom) -> Result<f64> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ObjectMismatch(format!(
                "comparing maps {:?} -> {:?} and {:?} -> {:?}",
                self.source.sizes(),
                self.target.sizes(),
                other.source.sizes(),
                other.target.sizes()
            )));
        }
        Ok((0..self.source.dim())
            .map(|p| {
                self.basis_image(p)
                    .sub(&other.basis_image(p))
                    .expect("same target")
                    .block_frobenius()
            })
            .fold(0.0, f64::max))
    }

    /// Checks multiplicativity on all matrix-unit pairs and *-preservation
    /// on all matrix units, returning the flagged map and the report.
    pub fn verify(self, tol: f64) -> (StarHom, CheckReport) {
        let report = verify_hom(&self, tol);
        let passed = report.passed();
        (self.mark_verified(passed), report)
    }

    /// Multiplicity counts: `c[j][i]` is the rank of block `j` of the image
    /// of the minimal projection `e^{(i)}_{11}`.
    pub fn canonical_form(&self) -> Result<Counts> {
        if !self.verified {
            return Err(Error::NotVerified("canonical_form needs a verified map".into()));
        }
        let mut counts = Counts::zeros(self.target.num_blocks(), self.source.num_blocks());
        for i in 0..self.source.num_blocks() {
            let p = self.source.structure().offset(i);
            let image = self.basis_image(p);
            let scale = image.op_norm();
            for (j, block) in image.blocks.iter().enumerate() {
                counts.0[j][i] = rank_against(block, scale);
            }
        }
        Ok(counts)
    }
}

/// `g ∘ f`; verified iff both are.
pub fn compose(g: &StarHom, f: &StarHom) -> Result<StarHom> {
    if f.target != g.source {
        return Err(Error::ObjectMismatch(format!(
            "cannot compose: inner target {:?} differs from outer source {:?}",
            f.target.sizes(),
            g.source.sizes()
        )));
    }
    let h = StarHom::from_matrix(f.source.clone(), g.target.clone(), &g.map * &f.map)?;
    Ok(h.mark_verified(f.verified && g.verified))
}

/// Residual report of the *-homomorphism laws on the matrix-unit basis.
///
/// Residuals are measured in the block-wise Frobenius norm, which bounds the
/// operator norm from above.
pub fn verify_hom(f: &StarHom, tol: f64) -> CheckReport {
    let s = f.source.structure();
    let images = f.basis_images();
    let zero = f.target.zero();
    let mut res = Residual::new();
    for p in 0..s.dim() {
        let up = s.matrix_unit(p);
        let star = &images[s.transpose_coordinate(p)];
        let d = star.sub(&images[p].adjoint()).expect("same target").block_frobenius();
        res.record(d, || format!("f(e_{p}*) != f(e_{p})* (deviation {d:e})"));
        for q in 0..s.dim() {
            let uq = s.matrix_unit(q);
            let product = if up.block == uq.block && up.col == uq.row {
                &images[s.coordinate(crate::algebra::MatrixUnit {
                    block: up.block,
                    row: up.row,
                    col: uq.col,
                })]
            } else {
                &zero
            };
            let d = product
                .sub(&images[p].mul(&images[q]).expect("same target"))
                .expect("same target")
                .block_frobenius();
            res.record(d, || format!("f(e_{p} e_{q}) != f(e_{p}) f(e_{q}) (deviation {d:e})"));
        }
    }
    res.report("verify_hom", tol, 0)
}

/// All count vectors `c` with `Σ c_i n_i ≤ m`.
pub fn admissible_count_rows(source_sizes: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn go(sizes: &[usize], budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match sizes.split_first() {
            None => out.push(prefix.clone()),
            Some((&n, rest)) => {
                for c in 0..=budget / n {
                    prefix.push(c);
                    go(rest, budget - c * n, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(source_sizes, m, &mut Vec::new(), &mut out);
    out
}

/// Random admissible multiplicity data: each target row drawn uniformly from
/// the admissible rows, each unitary Haar-distributed.
pub fn random_multiplicity_with<R: Rng + ?Sized>(
    source: &WStarAlgebra,
    target: &WStarAlgebra,
    rng: &mut R,
) -> MultiplicityData {
    let mut rows = Vec::with_capacity(target.num_blocks());
    let mut unitaries = Vec::with_capacity(target.num_blocks());
    for &m in target.sizes() {
        let options = admissible_count_rows(source.sizes(), m);
        rows.push(options[rng.random_range(0..options.len())].clone());
        unitaries.push(random::haar_unitary(rng, m));
    }
    MultiplicityData {
        counts: Counts(rows),
        unitaries,
    }
}

pub fn random_hom_with<R: Rng + ?Sized>(source: &WStarAlgebra, target: &WStarAlgebra, rng: &mut R) -> StarHom {
    let data = random_multiplicity_with(source, target, rng);
    StarHom::from_multiplicity(source, target, &data).expect("admissible by construction")
}

pub fn random_hom(source: &WStarAlgebra, target: &WStarAlgebra, seed: u64) -> StarHom {
    random_hom_with(source, target, &mut random::rng(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;

    fn alg(sizes: &[i64]) -> WStarAlgebra {
        make_algebra(sizes).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_and_zero_apply() {
        let a = alg(&[2, 1]);
        let x = random::random_element(&a, 1);
        assert_eq!(StarHom::identity(&a).apply(&x).unwrap(), x);
        let b = alg(&[3]);
        assert_eq!(StarHom::zero_hom(&a, &b).apply(&x).unwrap(), b.zero());
    }

    #[test]
    fn apply_rejects_foreign_element() {
        let f = StarHom::identity(&alg(&[2]));
        assert!(matches!(f.apply(alg(&[3]).unit()), Err(Error::StructureMismatch(_))));
    }

    #[test]
    fn corner_embedding() {
        let (m2, m3) = (alg(&[2]), alg(&[3]));
        let data = MultiplicityData::with_identity_unitaries(Counts(vec![vec![1]]), &m3);
        let f = StarHom::from_multiplicity(&m2, &m3, &data).unwrap();
        assert_eq!(f.apply(&m2.matrix_unit(0, 0, 0)).unwrap(), m3.matrix_unit(0, 0, 0));
        let x = random::random_element(&m2, 4);
        let y = f.apply(&x).unwrap();
        assert_eq!(y.blocks[0].view((0, 0), (2, 2)), x.blocks[0]);
        assert_eq!(y.blocks[0][(2, 2)], c(0.0));
        assert!(!f.is_unital());
        assert!(verify_hom(&f, 1e-10).passed());
    }

    #[test]
    fn diagonal_embedding_of_two_points() {
        let (a, b) = (alg(&[1, 1]), alg(&[2]));
        let data = MultiplicityData::with_identity_unitaries(Counts(vec![vec![1, 1]]), &b);
        let f = StarHom::from_multiplicity(&a, &b, &data).unwrap();
        let x = AlgebraElement::from_blocks(vec![CMatrix::from_element(1, 1, c(5.0)), CMatrix::from_element(1, 1, c(-2.0))]);
        let y = f.apply(&x).unwrap();
        assert_eq!(y.blocks[0], CMatrix::from_row_slice(2, 2, &[c(5.0), c(0.0), c(0.0), c(-2.0)]));
        assert!(f.is_unital());
    }

    #[test]
    fn doubled_copy_is_unital() {
        let (m2, m4) = (alg(&[2]), alg(&[4]));
        let data = MultiplicityData::with_identity_unitaries(Counts(vec![vec![2]]), &m4);
        let f = StarHom::from_multiplicity(&m2, &m4, &data).unwrap();
        let x = random::random_element(&m2, 8);
        let y = f.apply(&x).unwrap();
        assert_eq!(y.blocks[0].view((0, 0), (2, 2)), x.blocks[0]);
        assert_eq!(y.blocks[0].view((2, 2), (2, 2)), x.blocks[0]);
        assert_eq!(y.blocks[0].view((0, 2), (2, 2)), CMatrix::zeros(2, 2));
        assert!(f.is_unital());
    }

    #[test]
    fn multiplicity_overflow_and_bad_unitary() {
        let (m2, m3) = (alg(&[2]), alg(&[3]));
        let data = MultiplicityData::with_identity_unitaries(Counts(vec![vec![2]]), &m3);
        assert_eq!(
            StarHom::from_multiplicity(&m2, &m3, &data),
            Err(Error::MultiplicityOverflow { block: 0, needed: 4, available: 3 })
        );
        let mut data = MultiplicityData::with_identity_unitaries(Counts(vec![vec![1]]), &m3);
        data.unitaries[0] *= c(2.0);
        assert!(matches!(StarHom::from_multiplicity(&m2, &m3, &data), Err(Error::NotUnitary { block: 0, .. })));
    }

    #[test]
    fn compose_identity_and_mismatch() {
        let (a, b) = (alg(&[2, 1]), alg(&[3, 2]));
        let g = random_hom(&a, &b, 11);
        assert_eq!(compose(&g, &StarHom::identity(&a)).unwrap().distance(&g).unwrap(), 0.0);
        assert!(matches!(compose(&g, &g), Err(Error::ObjectMismatch(_))));
    }

    #[test]
    fn composed_counts_multiply() {
        let (m1, m2, m4) = (alg(&[1]), alg(&[2]), alg(&[4]));
        let f = StarHom::from_multiplicity(&m1, &m2, &MultiplicityData::with_identity_unitaries(Counts(vec![vec![2]]), &m2)).unwrap();
        let g = StarHom::from_multiplicity(&m2, &m4, &MultiplicityData::with_identity_unitaries(Counts(vec![vec![2]]), &m4)).unwrap();
        assert_eq!(compose(&g, &f).unwrap().canonical_form().unwrap(), Counts(vec![vec![4]]));
    }

    #[test]
    fn verify_rejects_trace_perturbation() {
        // x ↦ x + e_11 tr(x) on M_2
        let m2 = alg(&[2]);
        let f = StarHom::from_basis_images(m2.clone(), m2.clone(), |p| {
            let x = m2.basis_element(p);
            let tr = x.blocks[0].trace();
            x.add(&m2.matrix_unit(0, 0, 0).scale(tr)).unwrap()
        })
        .unwrap();
        let (f, report) = f.verify(1e-10);
        assert!(!report.passed());
        assert!(!f.is_verified());
        assert!(report.witness.is_some());
        // directly: f(e_12 e_21) = f(e_11) = 2 e_11, but f(e_12) f(e_21) = e_11
        let e12 = m2.matrix_unit(0, 0, 1);
        let e21 = m2.matrix_unit(0, 1, 0);
        let lhs = f.apply(&e12.mul(&e21).unwrap()).unwrap();
        let rhs = f.apply(&e12).unwrap().mul(&f.apply(&e21).unwrap()).unwrap();
        assert!(lhs.sub(&rhs).unwrap().op_norm() > 0.5);
    }

    #[test]
    fn zero_map_verifies() {
        let (a, b) = (alg(&[2, 1]), alg(&[2]));
        let z = StarHom::from_matrix(a.clone(), b.clone(), CMatrix::zeros(b.dim(), a.dim())).unwrap();
        let (z, report) = z.verify(1e-10);
        assert!(report.passed());
        assert!(z.is_verified());
        assert_eq!(z.canonical_form().unwrap(), Counts::zeros(1, 2));
    }

    #[test]
    fn canonical_form_basics() {
        let a = alg(&[2, 1]);
        assert_eq!(StarHom::identity(&a).canonical_form().unwrap(), Counts::identity(2));
        let raw = StarHom::from_matrix(a.clone(), a.clone(), CMatrix::identity(5, 5)).unwrap();
        assert!(matches!(raw.canonical_form(), Err(Error::NotVerified(_))));
    }

    #[test]
    fn zero_hom_unital_only_into_zero_algebra() {
        let o = WStarAlgebra::zero_algebra();
        for b in [alg(&[1]), alg(&[2, 1])] {
            assert!(!StarHom::zero_hom(&alg(&[2]), &b).is_unital());
            assert!(!StarHom::zero_hom(&o, &b).is_unital());
        }
        assert!(StarHom::zero_hom(&alg(&[2]), &o).is_unital());
        assert!(StarHom::zero_hom(&o, &o).is_unital());
    }

    #[test]
    fn admissible_rows_enumeration() {
        let rows = admissible_count_rows(&[2, 1], 3);
        // c0 ∈ {0,1}: c1 ≤ 3 - 2 c0
        assert_eq!(rows, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 0], vec![1, 1]]);
        assert_eq!(admissible_count_rows(&[], 4), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn unit_image_is_projection_commuting_with_range() {
        let (a, b) = (alg(&[2, 1]), alg(&[3, 4]));
        for seed in 0..10 {
            let f = random_hom(&a, &b, seed);
            let p = f.apply(a.unit()).unwrap();
            assert!(p.mul(&p).unwrap().sub(&p).unwrap().op_norm() < 1e-12);
            assert!(p.sub(&p.adjoint()).unwrap().op_norm() < 1e-12);
            for y in f.basis_images() {
                assert!(p.commutator(&y).unwrap().op_norm() < 1e-12);
            }
        }
    }
}
