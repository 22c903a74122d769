//! Algebra/predual duality at finite dimension.
//!
//! Annihilators are computed in dual coordinates under the bilinear trace
//! pairing. The quotient identities `M♮ ≅ X♮/M^⊥` and `(X/M)♮ ≅ M^⊥` are
//! checked isometrically on ideal summands (sub-sums of blocks), where
//! quotient norms are computable in closed form: the quotient of an
//! element is the max of its block norms off the summand, and the quotient
//! of a functional is the trace norm of its blocks on the summand. For
//! general subspaces only the dimension identity is available.

use std::collections::BTreeSet;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, Functional, WStarAlgebra, RANK_TOL};
use crate::error::{Error, Result};
use crate::morphism::{Counts, MultiplicityData, StarHom};
use crate::random::{self, WRng};
use crate::report::{CheckReport, Residual};
use crate::tensor::TensorStructure;
use crate::CMatrix;

/// A subspace of `ℂ^ambient` held as an orthonormal column basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSubspace {
    ambient: usize,
    basis: CMatrix,
}

impl LinearSubspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: CMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: CMatrix::identity(ambient, ambient),
        }
    }

    /// Span of the columns of `vectors`, rank-truncated at `RANK_TOL`
    /// relative to the largest singular value.
    pub fn span(vectors: &CMatrix) -> Self {
        let ambient = vectors.nrows();
        if vectors.ncols() == 0 || ambient == 0 {
            return Self::zero(ambient);
        }
        let svd = vectors.clone().svd(true, false);
        let u = svd.u.expect("u requested");
        let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| top > 0.0 && s > RANK_TOL * top)
            .map(|(i, _)| i)
            .collect();
        let mut basis = CMatrix::zeros(ambient, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            basis.set_column(k, &u.column(i));
        }
        Self { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Hermitian orthogonal complement.
    pub fn complement(&self) -> Self {
        let n = self.ambient;
        if self.dim() == 0 {
            return Self::full(n);
        }
        // eigenvalues of the projector are 0 or 1, so cut at 1/2
        let projector = CMatrix::identity(n, n) - &self.basis * self.basis.adjoint();
        let eig = projector.symmetric_eigen();
        let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
        let mut basis = CMatrix::zeros(n, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            basis.set_column(k, &eig.eigenvectors.column(i));
        }
        Self { ambient: n, basis }
    }
}

/// `Y^⊥ = {b : ⟨b, y⟩ = 0 for all y ∈ Y}` in dual coordinates.
///
/// With `T` the block-wise transpose permutation, `⟨b, y⟩ = bᵀ T y`, so the
/// annihilator is the Hermitian complement of `conj(T Y)`.
pub fn annihilator(alg: &WStarAlgebra, y: &LinearSubspace) -> Result<LinearSubspace> {
    let d = alg.dim();
    if y.ambient() != d {
        return Err(Error::StructureMismatch(format!(
            "subspace of ℂ^{} in algebra of dimension {d}",
            y.ambient()
        )));
    }
    let s = alg.structure();
    let mut conj_ty = CMatrix::zeros(d, y.dim());
    for c in 0..y.dim() {
        for p in 0..d {
            conj_ty[(s.transpose_coordinate(p), c)] = y.basis()[(p, c)].conj();
        }
    }
    Ok(LinearSubspace::span(&conj_ty).complement())
}

/// A sub-sum of blocks `⊕_{i∈S} M_{n_i}`: a weak-* closed two-sided ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealSummand {
    parent: WStarAlgebra,
    blocks: BTreeSet<usize>,
}

impl IdealSummand {
    pub fn new(parent: &WStarAlgebra, blocks: impl IntoIterator<Item = usize>) -> Result<Self> {
        let blocks: BTreeSet<usize> = blocks.into_iter().collect();
        if let Some(&bad) = blocks.iter().find(|&&b| b >= parent.num_blocks()) {
            return Err(Error::NotAnIdealSummand(format!(
                "block index {bad} out of range for {:?}",
                parent.sizes()
            )));
        }
        Ok(Self {
            parent: parent.clone(),
            blocks,
        })
    }

    /// Recognizes a subspace as a block sub-sum, or fails.
    pub fn from_subspace(parent: &WStarAlgebra, y: &LinearSubspace) -> Result<Self> {
        if y.ambient() != parent.dim() {
            return Err(Error::StructureMismatch("subspace ambient dimension differs from algebra".into()));
        }
        let s = parent.structure();
        let blocks: Vec<usize> = (0..parent.num_blocks())
            .filter(|&b| {
                let n = parent.sizes()[b];
                (0..n * n).all(|k| {
                    let mut e = DVector::zeros(parent.dim());
                    e[s.offset(b) + k] = Complex64::new(1.0, 0.0);
                    (y.project(&e) - &e).norm() <= 1e-9
                })
            })
            .collect();
        let summand = Self::new(parent, blocks)?;
        if summand.dim() != y.dim() {
            return Err(Error::NotAnIdealSummand(format!(
                "subspace of dimension {} is not a sum of blocks (largest contained block sum has dimension {})",
                y.dim(),
                summand.dim()
            )));
        }
        Ok(summand)
    }

    pub fn parent(&self) -> &WStarAlgebra {
        &self.parent
    }

    pub fn blocks(&self) -> &BTreeSet<usize> {
        &self.blocks
    }

    pub fn contains_block(&self, b: usize) -> bool {
        self.blocks.contains(&b)
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|&b| self.parent.sizes()[b].pow(2)).sum()
    }

    pub fn subspace(&self) -> LinearSubspace {
        let s = self.parent.structure();
        let mut basis = CMatrix::zeros(self.parent.dim(), self.dim());
        let mut col = 0;
        for &b in &self.blocks {
            let n = self.parent.sizes()[b];
            for k in 0..n * n {
                basis[(s.offset(b) + k, col)] = Complex64::new(1.0, 0.0);
                col += 1;
            }
        }
        LinearSubspace {
            ambient: self.parent.dim(),
            basis,
        }
    }

    /// Blocks on the summand kept, the rest zeroed (or the reverse).
    fn split_blocks(&self, blocks: &[CMatrix], keep_inside: bool) -> Vec<CMatrix> {
        blocks
            .iter()
            .enumerate()
            .map(|(b, m)| {
                if self.contains_block(b) == keep_inside {
                    m.clone()
                } else {
                    CMatrix::zeros(m.nrows(), m.ncols())
                }
            })
            .collect()
    }

    pub fn inside(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_blocks(self.split_blocks(&x.blocks, true))
    }

    pub fn outside(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_blocks(self.split_blocks(&x.blocks, false))
    }

    pub fn functional_inside(&self, b: &Functional) -> Functional {
        Functional::from_blocks(self.split_blocks(&b.blocks, true))
    }

    pub fn functional_outside(&self, b: &Functional) -> Functional {
        Functional::from_blocks(self.split_blocks(&b.blocks, false))
    }

    /// `‖x + M‖ = max_{i∉S} ‖x_i‖`.
    pub fn quotient_norm(&self, x: &AlgebraElement) -> f64 {
        self.outside(x).op_norm()
    }

    /// `X/M` as the algebra of the blocks off `S`.
    pub fn quotient_algebra(&self) -> WStarAlgebra {
        let sizes: Vec<usize> = self
            .parent
            .sizes()
            .iter()
            .enumerate()
            .filter(|(b, _)| !self.contains_block(*b))
            .map(|(_, &n)| n)
            .collect();
        WStarAlgebra::from_sizes(&sizes).expect("parent sizes are positive")
    }

    /// The quotient map `X → X/M`, a surjective *-homomorphism.
    pub fn quotient_map(&self) -> StarHom {
        let q = self.quotient_algebra();
        let kept: Vec<usize> = (0..self.parent.num_blocks()).filter(|b| !self.contains_block(*b)).collect();
        let mut counts = Counts::zeros(kept.len(), self.parent.num_blocks());
        for (j, &b) in kept.iter().enumerate() {
            counts.0[j][b] = 1;
        }
        StarHom::from_multiplicity(&self.parent, &q, &MultiplicityData::with_identity_unitaries(counts, &q))
            .expect("one copy per kept block")
    }

    /// Two-sided invariance on the matrix-unit basis: the mass of
    /// `e_p e_q` and `e_q e_p` outside `S` for `e_p ∈ M`, `e_q ∈ X`.
    pub fn ideal_check(&self, tol: f64) -> CheckReport {
        let x = &self.parent;
        let mut res = Residual::new();
        for p in 0..x.dim() {
            let up = x.structure().matrix_unit(p);
            if !self.contains_block(up.block) {
                continue;
            }
            let ep = x.basis_element(p);
            for q in 0..x.dim() {
                let eq = x.basis_element(q);
                let left = self.outside(&ep.mul(&eq).expect("same algebra")).block_frobenius();
                let right = self.outside(&eq.mul(&ep).expect("same algebra")).block_frobenius();
                let d = left.max(right);
                res.record(d, || format!("e_{p} e_{q} leaves the summand"));
            }
        }
        res.report("ideal_check", tol, 0)
    }
}

fn random_combination(basis: &CMatrix, rng: &mut WRng) -> DVector<Complex64> {
    let coeffs = random::gaussian_matrix(rng, basis.ncols(), 1);
    basis * coeffs.column(0)
}

fn rel(d: f64, scale: f64) -> f64 {
    d / scale.max(1.0)
}

/// Verifies `(X/M)♮ ≅ M^⊥` and `M♮ ≅ X♮/M^⊥` isometrically on an ideal
/// summand, together with the dimension identities. Norm residuals are
/// relative to `max(1, norm)`.
pub fn subspace_dual_isometry(m: &IdealSummand, probes: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let name = "annihilator_duality";
    let ideal = m.ideal_check(1e-12);
    if !ideal.passed() {
        return Err(Error::NotAnIdealSummand(ideal.witness.unwrap_or_default()));
    }
    let x_alg = m.parent();
    let d = x_alg.dim();
    let m_perp = annihilator(x_alg, &m.subspace())?;
    let mut res = Residual::new();

    // dimension identities
    let dim_gap = [
        (m_perp.dim() + m.dim()).abs_diff(d),
        m.quotient_algebra().dim().abs_diff(m_perp.dim()),
        m.dim().abs_diff(d - m_perp.dim()),
    ]
    .into_iter()
    .max()
    .unwrap_or(0);
    if dim_gap != 0 {
        res.record(f64::INFINITY, || {
            format!("dimension identities fail: dim M = {}, dim M^⊥ = {}, dim X = {d}", m.dim(), m_perp.dim())
        });
    }
    // M^⊥ is exactly the functionals supported off S
    for c in 0..m_perp.dim() {
        let b = x_alg.functional_from_coords(&m_perp.basis().column(c).into_owned())?;
        let leak = m.functional_inside(&b).to_element().block_frobenius();
        res.record(leak, || format!("annihilator basis vector {c} has mass {leak:e} on the summand"));
    }

    let mut rng = random::rng(seed);
    for k in 0..probes {
        let x = random::random_element_with(x_alg, &mut rng);
        let qn = m.quotient_norm(&x);

        // ‖x + M‖: attained at m = -x_S, and no m ∈ M does better
        let mut in_m = random::random_element_with(x_alg, &mut rng);
        in_m = m.inside(&in_m);
        let shifted = x.add(&in_m)?.op_norm();
        let d1 = (qn - shifted).max(0.0);
        res.record(rel(d1, qn), || format!("probe {k}: ‖x+m‖ = {shifted} below quotient norm {qn}"));
        let attained = x.sub(&m.inside(&x))?.op_norm();
        let d2 = (attained - qn).abs();
        res.record(rel(d2, qn), || format!("probe {k}: infimum not attained at m = -x_S"));

        // (X/M)♮ ≅ M^⊥, element side: ‖x + M‖ = sup_{b ∈ M^⊥, ‖b‖₁ ≤ 1} |b(x)|
        let norming = m.outside(&x).norming_functional();
        let membership = (m_perp.project(&norming.coords()) - norming.coords()).norm();
        res.record(membership, || format!("probe {k}: norming functional not in M^⊥ ({membership:e})"));
        let d3 = (norming.pair(&x)?.norm() - qn).abs();
        res.record(rel(d3, qn), || format!("probe {k}: dual formula misses quotient norm by {d3:e}"));

        // functional side: b ∈ M^⊥ has dual norm on X/M equal to its trace norm
        let b = x_alg.functional_from_coords(&random_combination(m_perp.basis(), &mut rng))?;
        let bn = b.tr_norm();
        let over = (b.pair(&x)?.norm() - bn * qn).max(0.0);
        res.record(rel(over, bn * qn), || format!("probe {k}: |b(x)| exceeds ‖b‖₁ ‖x+M‖ by {over:e}"));
        let arg = b.maximizer();
        let d4 = (b.pair(&arg)?.norm() - bn).abs() + (m.quotient_norm(&arg) - 1.0).max(0.0);
        res.record(rel(d4, bn), || format!("probe {k}: dual norm on X/M not attained ({d4:e})"));

        // M♮ ≅ X♮/M^⊥: ‖φ|_M‖ = inf_{c ∈ M^⊥} ‖φ + c‖₁
        let phi = random::random_functional_with(x_alg, &mut rng);
        let on_m = m.functional_inside(&phi);
        let restricted = phi.pair(&m.inside(&on_m.maximizer()))?.norm();
        let quotient = on_m.tr_norm();
        let d5 = (restricted - quotient).abs();
        res.record(rel(d5, quotient), || format!("probe {k}: ‖φ|_M‖ = {restricted} vs ‖φ + M^⊥‖ = {quotient}"));
        let c = x_alg.functional_from_coords(&random_combination(m_perp.basis(), &mut rng))?;
        let d6 = (quotient - phi.add(&c)?.tr_norm()).max(0.0);
        res.record(rel(d6, quotient), || format!("probe {k}: some c ∈ M^⊥ beats the quotient norm by {d6:e}"));
        let y = m.inside(&random::random_element_with(x_alg, &mut rng));
        let d7 = (phi.pair(&y)?.norm() - restricted * y.op_norm()).max(0.0);
        res.record(rel(d7, restricted * y.op_norm()), || format!("probe {k}: |φ(m)| exceeds ‖φ|_M‖ ‖m‖"));
    }
    Ok(res.report(name, tol, seed))
}

/// `j(x)` as a functional on the dual: `(j(x))(φ) = ⟨φ, x⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bidual {
    coords: DVector<Complex64>,
}

impl Bidual {
    pub fn embed(alg: &WStarAlgebra, x: &AlgebraElement) -> Result<Self> {
        alg.check_element(x)?;
        let s = alg.structure();
        let xc = x.coords();
        Ok(Self {
            coords: DVector::from_fn(alg.dim(), |p, _| xc[s.transpose_coordinate(p)]),
        })
    }

    pub fn evaluate(&self, phi: &Functional) -> Complex64 {
        phi.coords().iter().zip(self.coords.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }
}

/// Verifies `(j(x))(φ) = φ(x)`, `‖j(x)‖ = ‖x‖` (attained by the norming
/// functional, never exceeded by sampled ones), and bijectivity of `j`.
pub fn double_dual_check(alg: &WStarAlgebra, probes: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut res = Residual::new();
    let d = alg.dim();
    // j is a bijection iff its coordinate matrix has full rank
    let mut jm = CMatrix::zeros(d, d);
    for p in 0..d {
        jm.set_column(p, &Bidual::embed(alg, &alg.basis_element(p))?.coords);
    }
    let rank = crate::algebra::numerical_rank(&jm);
    if rank != d {
        res.record(f64::INFINITY, || format!("j has rank {rank} on a space of dimension {d}"));
    }

    let mut rng = random::rng(seed);
    for k in 0..probes {
        let x = random::random_element_with(alg, &mut rng);
        let jx = Bidual::embed(alg, &x)?;
        let norm = x.op_norm();
        let phi = random::random_functional_with(alg, &mut rng);
        let d1 = (jx.evaluate(&phi) - phi.pair(&x)?).norm();
        res.record(rel(d1, phi.tr_norm() * norm), || format!("probe {k}: j(x)(φ) != φ(x)"));
        let attained = jx.evaluate(&x.norming_functional()).norm();
        res.record(rel((attained - norm).abs(), norm), || format!("probe {k}: ‖j(x)‖ = {attained} vs ‖x‖ = {norm}"));
        let phi_n = phi.tr_norm();
        if phi_n > 0.0 {
            let sampled = jx.evaluate(&phi).norm() / phi_n;
            res.record(rel((sampled - norm).max(0.0), norm), || format!("probe {k}: sampled functional exceeds ‖x‖"));
        }
    }
    Ok(res.report("double_dual", tol, seed))
}

/// `b ↦ φ(x ⊗ b)` as a functional on the right factor.
pub fn partial_evaluate(ts: &TensorStructure, phi: &Functional, x: &AlgebraElement) -> Result<Functional> {
    ts.total().check_functional(phi)?;
    let right = ts.right();
    let s = right.structure();
    let mut coords = DVector::zeros(right.dim());
    for q in 0..right.dim() {
        let v = phi.pair(&ts.tensor_elements(x, &right.basis_element(q))?)?;
        coords[s.transpose_coordinate(q)] = v;
    }
    right.functional_from_coords(&coords)
}

/// `a ↦ φ(a ⊗ y)` as a functional on the left factor.
pub fn partial_evaluate_right(ts: &TensorStructure, phi: &Functional, y: &AlgebraElement) -> Result<Functional> {
    ts.total().check_functional(phi)?;
    let left = ts.left();
    let s = left.structure();
    let mut coords = DVector::zeros(left.dim());
    for p in 0..left.dim() {
        let v = phi.pair(&ts.tensor_elements(&left.basis_element(p), y)?)?;
        coords[s.transpose_coordinate(p)] = v;
    }
    left.functional_from_coords(&coords)
}

/// Residuals of the predual tensor identity over random functional pairs.
#[derive(Clone, Debug, Default)]
pub struct PredualTensorResiduals {
    /// `|⟨b1⊗b2, a1⊗a2⟩ − ⟨b1,a1⟩⟨b2,a2⟩|`, relative to `max(1, |rhs|)`.
    pub factorization: Residual,
    /// `|‖b1⊗b2‖₁ − ‖b1‖₁‖b2‖₁|`, relative to the product.
    pub cross_law: Residual,
    /// `dim (A⊗B)_* = dim A_* · dim B_*`.
    pub dims_match: bool,
}

pub fn predual_tensor_residuals(ts: &TensorStructure, trials: usize, seed: u64) -> PredualTensorResiduals {
    let (a, b) = (ts.left(), ts.right());
    let mut out = PredualTensorResiduals {
        dims_match: ts.total().dim() == a.dim() * b.dim(),
        ..Default::default()
    };
    let mut rng = random::rng(seed);
    for k in 0..trials {
        let b1 = random::random_functional_with(a, &mut rng);
        let b2 = random::random_functional_with(b, &mut rng);
        let a1 = random::random_element_with(a, &mut rng);
        let a2 = random::random_element_with(b, &mut rng);
        let phi = ts.tensor_functionals(&b1, &b2).expect("shapes");
        let z = ts.tensor_elements(&a1, &a2).expect("shapes");
        let rhs = b1.pair(&a1).expect("shapes") * b2.pair(&a2).expect("shapes");
        let d = (phi.pair(&z).expect("shapes") - rhs).norm() / rhs.norm().max(1.0);
        out.factorization.record(d, || format!("trial {k}: pairing does not factor ({d:e})"));
        let prod = b1.tr_norm() * b2.tr_norm();
        let d = (phi.tr_norm() - prod).abs() / prod.max(f64::MIN_POSITIVE);
        out.cross_law.record(if prod == 0.0 { phi.tr_norm() } else { d }, || {
            format!("trial {k}: trace norm not multiplicative ({d:e})")
        });
    }
    out
}

/// Pairing factorization, trace-norm cross law and dimension count.
pub fn predual_tensor_check(ts: &TensorStructure, trials: usize, seed: u64, tol: f64) -> CheckReport {
    let r = predual_tensor_residuals(ts, trials, seed);
    let mut res = r.cross_law;
    res.merge(r.factorization);
    if !r.dims_match {
        res.record(f64::INFINITY, || "dimension of the tensor predual is not the product".into());
    }
    res.report("predual_tensor", tol, seed)
}
