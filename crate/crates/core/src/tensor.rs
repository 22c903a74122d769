//! Tensor products of multi-matrix algebras and of morphisms, the
//! universal-property mediator, and the min/max C*-norm checks.
//!
//! `(⊕_i M_{n_i}) ⊗ (⊕_j M_{m_j}) = ⊕_{(i,j)} M_{n_i m_j}` with block `(i,j)`
//! holding `x_i ⊗ y_j` as a Kronecker product. Simple tensors of matrix
//! units are matrix units, so every realization is described by a
//! permutation from simple-tensor indices `(p, q)` to total coordinates.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{AlgebraElement, Functional, MatrixUnit, WStarAlgebra};
use crate::error::{Error, Result};
use crate::morphism::{random_hom_with, Counts, MultiplicityData, StarHom};
use crate::random;
use crate::report::{CheckReport, Residual};
use crate::CMatrix;

/// Tolerance used when a mediator checks its commuting-range precondition.
pub const COMMUTE_TOL: f64 = 1e-10;

/// How simple tensors are laid out in the total algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TensorLayout {
    /// Blocks ordered by `(i, j)`, block `(i,j)` = `kron(x_i, y_j)`.
    Canonical,
    /// Blocks ordered by `(j, i)`, block `(j,i)` = `kron(y_j, x_i)`.
    Flipped,
}

/// Enumeration order over simple-tensor basis pairs when building maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisOrder {
    LeftMajor,
    RightMajor,
}

/// A concrete tensor product `left ⊗ right` with its embeddings
/// `w1(a) = a ⊗ 𝟙` and `w2(b) = 𝟙 ⊗ b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorStructure {
    left: WStarAlgebra,
    right: WStarAlgebra,
    total: WStarAlgebra,
    layout: TensorLayout,
    w1: StarHom,
    w2: StarHom,
    simple_to_total: Vec<usize>,
}

/// Canonical (lexicographic) tensor product.
pub fn tensor_algebra(left: &WStarAlgebra, right: &WStarAlgebra) -> TensorStructure {
    TensorStructure::new(left, right, TensorLayout::Canonical)
}

impl TensorStructure {
    pub fn new(left: &WStarAlgebra, right: &WStarAlgebra, layout: TensorLayout) -> Self {
        let (ls, rs) = (left.sizes(), right.sizes());
        let sizes: Vec<usize> = match layout {
            TensorLayout::Canonical => ls.iter().flat_map(|&n| rs.iter().map(move |&m| n * m)).collect(),
            TensorLayout::Flipped => rs.iter().flat_map(|&m| ls.iter().map(move |&n| m * n)).collect(),
        };
        let total = WStarAlgebra::from_sizes(&sizes).expect("products of positive sizes");

        let (l, r) = (left.structure(), right.structure());
        let mut simple_to_total = Vec::with_capacity(left.dim() * right.dim());
        for p in 0..left.dim() {
            let a = l.matrix_unit(p);
            for q in 0..right.dim() {
                let b = r.matrix_unit(q);
                simple_to_total.push(total.structure().coordinate(Self::unit_position(layout, left, right, a, b)));
            }
        }

        let mut ts = Self {
            left: left.clone(),
            right: right.clone(),
            total: total.clone(),
            layout,
            w1: StarHom::zero_hom(left, &total),
            w2: StarHom::zero_hom(right, &total),
            simple_to_total,
        };
        // Kronecker factors with the unit are *-homomorphisms by construction.
        ts.w1 = StarHom::from_basis_images(left.clone(), total.clone(), |p| {
            ts.tensor_elements(&left.basis_element(p), right.unit()).expect("shapes match")
        })
        .expect("shapes match")
        .mark_verified(true);
        ts.w2 = StarHom::from_basis_images(right.clone(), total.clone(), |q| {
            ts.tensor_elements(left.unit(), &right.basis_element(q)).expect("shapes match")
        })
        .expect("shapes match")
        .mark_verified(true);
        ts
    }

    fn unit_position(
        layout: TensorLayout,
        left: &WStarAlgebra,
        right: &WStarAlgebra,
        a: MatrixUnit,
        b: MatrixUnit,
    ) -> MatrixUnit {
        let (n, m) = (left.sizes()[a.block], right.sizes()[b.block]);
        match layout {
            TensorLayout::Canonical => MatrixUnit {
                block: a.block * right.num_blocks() + b.block,
                row: a.row * m + b.row,
                col: a.col * m + b.col,
            },
            TensorLayout::Flipped => MatrixUnit {
                block: b.block * left.num_blocks() + a.block,
                row: b.row * n + a.row,
                col: b.col * n + a.col,
            },
        }
    }

    pub fn left(&self) -> &WStarAlgebra {
        &self.left
    }

    pub fn right(&self) -> &WStarAlgebra {
        &self.right
    }

    pub fn total(&self) -> &WStarAlgebra {
        &self.total
    }

    pub fn layout(&self) -> TensorLayout {
        self.layout
    }

    pub fn w1(&self) -> &StarHom {
        &self.w1
    }

    pub fn w2(&self) -> &StarHom {
        &self.w2
    }

    /// Total coordinate of `e_p ⊗ e_q`.
    pub fn simple_coordinate(&self, p: usize, q: usize) -> usize {
        self.simple_to_total[p * self.right.dim() + q]
    }

    fn kron_blocks(&self, x: &[CMatrix], y: &[CMatrix]) -> Vec<CMatrix> {
        match self.layout {
            TensorLayout::Canonical => x.iter().flat_map(|a| y.iter().map(move |b| a.kronecker(b))).collect(),
            TensorLayout::Flipped => y.iter().flat_map(|b| x.iter().map(move |a| b.kronecker(a))).collect(),
        }
    }

    /// `x ⊗ y` in the total algebra.
    pub fn tensor_elements(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.left.check_element(x)?;
        self.right.check_element(y)?;
        Ok(AlgebraElement::from_blocks(self.kron_blocks(&x.blocks, &y.blocks)))
    }

    /// `φ1 ⊗ φ2`, the functional with `⟨φ1⊗φ2, a⊗b⟩ = ⟨φ1,a⟩⟨φ2,b⟩`.
    pub fn tensor_functionals(&self, b1: &Functional, b2: &Functional) -> Result<Functional> {
        self.left.check_functional(b1)?;
        self.right.check_functional(b2)?;
        Ok(Functional::from_blocks(self.kron_blocks(&b1.blocks, &b2.blocks)))
    }

    /// Universal mediator `t: left ⊗ right → M` with `t(a ⊗ b) = t1(a) t2(b)`.
    pub fn mediator(&self, t1: &StarHom, t2: &StarHom) -> Result<StarHom> {
        self.mediator_in_order(t1, t2, BasisOrder::LeftMajor)
    }

    pub fn mediator_in_order(&self, t1: &StarHom, t2: &StarHom, order: BasisOrder) -> Result<StarHom> {
        if t1.source() != &self.left || t2.source() != &self.right {
            return Err(Error::ObjectMismatch(format!(
                "mediator for {:?} ⊗ {:?} given maps from {:?} and {:?}",
                self.left.sizes(),
                self.right.sizes(),
                t1.source().sizes(),
                t2.source().sizes()
            )));
        }
        if t1.target() != t2.target() {
            return Err(Error::ObjectMismatch(format!(
                "mediator maps land in {:?} and {:?}",
                t1.target().sizes(),
                t2.target().sizes()
            )));
        }
        if !t1.is_verified() || !t2.is_verified() {
            return Err(Error::NotVerified("mediator needs verified t1 and t2".into()));
        }
        if let (_, Some((p, q, magnitude))) = scan_commutators(t1, t2, COMMUTE_TOL) {
            return Err(Error::RangesDoNotCommute {
                left_basis: p,
                right_basis: q,
                magnitude,
                pair: None,
            });
        }

        let target = t1.target().clone();
        let (a_img, b_img) = (t1.basis_images(), t2.basis_images());
        let mut map = CMatrix::zeros(target.dim(), self.total.dim());
        let mut fill = |p: usize, q: usize| {
            let y = a_img[p].mul(&b_img[q]).expect("shared target");
            map.set_column(self.simple_coordinate(p, q), &y.coords());
        };
        match order {
            BasisOrder::LeftMajor => {
                for p in 0..self.left.dim() {
                    for q in 0..self.right.dim() {
                        fill(p, q);
                    }
                }
            }
            BasisOrder::RightMajor => {
                for q in 0..self.right.dim() {
                    for p in 0..self.left.dim() {
                        fill(p, q);
                    }
                }
            }
        }
        // Commuting ranges of verified maps make this a *-homomorphism.
        Ok(StarHom::from_matrix(self.total.clone(), target, map)?.mark_verified(true))
    }

    /// Checks the mediator triangles. `t ∘ w1 = t1(·) t2(𝟙)` and
    /// `t ∘ w2 = t1(𝟙) t2(·)` always; the strict `t ∘ w1 = t1` only when `t2`
    /// is unital (and symmetrically). A skipped strict triangle is noted in
    /// the witness.
    pub fn mediator_triangles(&self, t: &StarHom, t1: &StarHom, t2: &StarHom, tol: f64) -> Result<CheckReport> {
        let tw1 = t.after(&self.w1)?;
        let tw2 = t.after(&self.w2)?;
        let u1 = t1.apply(self.left.unit())?;
        let u2 = t2.apply(self.right.unit())?;
        let mut res = Residual::new();
        for p in 0..self.left.dim() {
            let want = t1.basis_image(p).mul(&u2)?;
            let d = tw1.basis_image(p).sub(&want)?.block_frobenius();
            res.record(d, || format!("t(w1(e_{p})) != t1(e_{p}) t2(1) (deviation {d:e})"));
        }
        for q in 0..self.right.dim() {
            let want = u1.mul(&t2.basis_image(q))?;
            let d = tw2.basis_image(q).sub(&want)?.block_frobenius();
            res.record(d, || format!("t(w2(e_{q})) != t1(1) t2(e_{q}) (deviation {d:e})"));
        }
        let mut notes = Vec::new();
        if t2.is_unital() {
            let d = tw1.distance(t1)?;
            res.record(d, || format!("strict triangle t∘w1 = t1 fails (deviation {d:e})"));
        } else {
            notes.push("t2 not unital: only t∘w1 = t1(·)t2(1) required");
        }
        if t1.is_unital() {
            let d = tw2.distance(t2)?;
            res.record(d, || format!("strict triangle t∘w2 = t2 fails (deviation {d:e})"));
        } else {
            notes.push("t1 not unital: only t∘w2 = t1(1)t2(·) required");
        }
        let mut report = res.report("mediator_triangles", tol, 0);
        if report.witness.is_none() && !notes.is_empty() {
            report.witness = Some(notes.join("; "));
        }
        Ok(report)
    }
}

/// Scans all basis commutators `[t1(e_p), t2(e_q)]`: returns the largest
/// norm and the first pair (in enumeration order) exceeding `tol`.
fn scan_commutators(t1: &StarHom, t2: &StarHom, tol: f64) -> (f64, Option<(usize, usize, f64)>) {
    let (a_img, b_img) = (t1.basis_images(), t2.basis_images());
    let mut max: f64 = 0.0;
    let mut first = None;
    for (p, a) in a_img.iter().enumerate() {
        for (q, b) in b_img.iter().enumerate() {
            let d = a.commutator(b).expect("shared target").block_frobenius();
            if d.is_nan() || d > max {
                max = d;
            }
            if first.is_none() && !(d <= tol) {
                first = Some((p, q, d));
            }
        }
    }
    (max, first)
}

/// Passes iff every basis commutator `[t1(e_p), t2(e_q)]` is within `tol`.
/// The witness names the first offending pair.
pub fn ranges_commute(t1: &StarHom, t2: &StarHom, tol: f64) -> Result<CheckReport> {
    if t1.target() != t2.target() {
        return Err(Error::ObjectMismatch(format!(
            "ranges in different algebras {:?} and {:?}",
            t1.target().sizes(),
            t2.target().sizes()
        )));
    }
    let (max, first) = scan_commutators(t1, t2, tol);
    let mut report = CheckReport::from_error("ranges_commute", max, tol, 0, None);
    if let Some((p, q, d)) = first {
        report.witness = Some(format!("[t1(e_{p}), t2(e_{q})] has norm {d:e}"));
    }
    Ok(report)
}

/// Mediator over the canonical tensor product of the sources.
pub fn mediator(t1: &StarHom, t2: &StarHom) -> Result<StarHom> {
    tensor_algebra(t1.source(), t2.source()).mediator(t1, t2)
}

/// `f ⊗ g` between given realizations, defined on simple tensors of matrix
/// units by `f(e_p) ⊗ g(e_q)`.
pub fn tensor_homs_between(
    source: &TensorStructure,
    target: &TensorStructure,
    f: &StarHom,
    g: &StarHom,
) -> Result<StarHom> {
    if !f.is_verified() || !g.is_verified() {
        return Err(Error::NotVerified("tensor_homs needs verified factors".into()));
    }
    if f.source() != source.left() || g.source() != source.right() || f.target() != target.left() || g.target() != target.right() {
        return Err(Error::ObjectMismatch("factor maps do not match the tensor structures".into()));
    }
    let (f_img, g_img) = (f.basis_images(), g.basis_images());
    let mut map = CMatrix::zeros(target.total().dim(), source.total().dim());
    for (p, fp) in f_img.iter().enumerate() {
        for (q, gq) in g_img.iter().enumerate() {
            let y = target.tensor_elements(fp, gq)?;
            map.set_column(source.simple_coordinate(p, q), &y.coords());
        }
    }
    Ok(StarHom::from_matrix(source.total().clone(), target.total().clone(), map)?.mark_verified(true))
}

/// `f ⊗ g : A⊗B → C⊗D` on canonical tensor products.
pub fn tensor_homs(f: &StarHom, g: &StarHom) -> Result<StarHom> {
    tensor_homs_between(
        &tensor_algebra(f.source(), g.source()),
        &tensor_algebra(f.target(), g.target()),
        f,
        g,
    )
}

/// The block representation is faithful, so the min C*-norm is the
/// operator norm of the total algebra.
pub fn min_norm(z: &AlgebraElement) -> f64 {
    z.op_norm()
}

/// `sup ‖m∘(ς1⊠ς2)(z)‖` over the supplied commuting pairs; 0 for no pairs.
pub fn max_norm_lower_bound(ts: &TensorStructure, z: &AlgebraElement, pairs: &[(StarHom, StarHom)]) -> Result<f64> {
    ts.total().check_element(z)?;
    let mut best: f64 = 0.0;
    for (k, (s1, s2)) in pairs.iter().enumerate() {
        let t = ts.mediator(s1, s2).map_err(|e| match e {
            Error::RangesDoNotCommute {
                left_basis,
                right_basis,
                magnitude,
                ..
            } => Error::RangesDoNotCommute {
                left_basis,
                right_basis,
                magnitude,
                pair: Some(k),
            },
            other => other,
        })?;
        best = best.max(t.apply(z)?.op_norm());
    }
    Ok(best)
}

/// The commuting-pair constructions used for random testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// `ς_i = h ∘ w_i` for a random *-homomorphism `h` out of `A ⊗ B`.
    TensorSplit,
    /// Same, with `h` unital so both legs are unital.
    UnitalSplit,
    /// `A` and `B` embedded into orthogonal corners of one matrix block.
    Corner,
    /// Tensor split with the second leg replaced by the zero morphism.
    WithZero,
}

pub const PAIR_KINDS: [PairKind; 4] = [PairKind::TensorSplit, PairKind::UnitalSplit, PairKind::Corner, PairKind::WithZero];

/// Random unital *-homomorphism out of `source` into a freshly drawn algebra
/// whose blocks are exactly filled by the chosen multiplicities.
pub fn random_unital_hom_with<R: Rng + ?Sized>(source: &WStarAlgebra, max_blocks: usize, rng: &mut R) -> StarHom {
    if source.is_zero_algebra() {
        let o = WStarAlgebra::zero_algebra();
        return StarHom::zero_hom(source, &o);
    }
    let k = rng.random_range(1..=max_blocks.max(1));
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let mut row: Vec<usize> = source.sizes().iter().map(|_| rng.random_range(0..=1)).collect();
        if row.iter().all(|&c| c == 0) {
            let i = rng.random_range(0..row.len());
            row[i] = 1;
        }
        rows.push(row);
    }
    let sizes: Vec<usize> = rows
        .iter()
        .map(|row| row.iter().zip(source.sizes()).map(|(c, n)| c * n).sum())
        .collect();
    let target = WStarAlgebra::from_sizes(&sizes).expect("positive by construction");
    let unitaries = sizes.iter().map(|&m| random::haar_unitary(rng, m)).collect();
    StarHom::from_multiplicity(source, &target, &MultiplicityData { counts: Counts(rows), unitaries })
        .expect("exact fill is admissible")
}

/// A random pair `(ς1: A → M, ς2: B → M)` with commuting ranges.
pub fn random_commuting_pair_with<R: Rng + ?Sized>(
    ts: &TensorStructure,
    kind: PairKind,
    rng: &mut R,
) -> (StarHom, StarHom) {
    let (a, b) = (ts.left(), ts.right());
    match kind {
        PairKind::TensorSplit | PairKind::WithZero => {
            // target blocks a little larger than the total blocks so random
            // counts are often nonzero
            let sizes: Vec<usize> = ts
                .total()
                .sizes()
                .iter()
                .map(|&n| n * rng.random_range(1..=2) + rng.random_range(0..=1))
                .collect();
            let m = WStarAlgebra::from_sizes(&sizes).expect("positive");
            let h = random_hom_with(ts.total(), &m, rng);
            let s1 = h.after(ts.w1()).expect("composable");
            let s2 = if kind == PairKind::WithZero {
                StarHom::zero_hom(b, &m)
            } else {
                h.after(ts.w2()).expect("composable")
            };
            (s1, s2)
        }
        PairKind::UnitalSplit => {
            let h = random_unital_hom_with(ts.total(), 2, rng);
            (h.after(ts.w1()).expect("composable"), h.after(ts.w2()).expect("composable"))
        }
        PairKind::Corner => {
            let (sa, sb): (usize, usize) = (a.sizes().iter().sum(), b.sizes().iter().sum());
            let m = (sa + sb + rng.random_range(0..=1)).max(1);
            let target = WStarAlgebra::from_sizes(&[m]).expect("positive");
            let w = random::haar_unitary(rng, m);
            // shift the second corner past the first by permuting columns
            let mut shifted = CMatrix::zeros(m, m);
            for c in 0..m {
                shifted.set_column(c, &w.column((c + sa) % m));
            }
            let ones = |alg: &WStarAlgebra| Counts(vec![vec![1; alg.num_blocks()]]);
            let s1 = StarHom::from_multiplicity(a, &target, &MultiplicityData { counts: ones(a), unitaries: vec![w] })
                .expect("fits");
            let s2 = StarHom::from_multiplicity(b, &target, &MultiplicityData { counts: ones(b), unitaries: vec![shifted] })
                .expect("fits");
            (s1, s2)
        }
    }
}

/// For diagonal algebras `ℂ^p ⊗ ℂ^q`, compares `min_norm(Σ_k f_k ⊗ g_k)`
/// against the explicit grid maximum `max_{x,y} |Σ_k f_k(x) g_k(y)|`, and
/// checks the tensor algebra is `q·p` one-dimensional blocks.
pub fn commutative_tensor_check(p: usize, q: usize, terms: usize, trials: usize, seed: u64, tol: f64) -> CheckReport {
    let name = "commutative_tensor";
    let (Ok(x), Ok(y)) = (WStarAlgebra::from_sizes(&vec![1; p]), WStarAlgebra::from_sizes(&vec![1; q])) else {
        return CheckReport::errored(name, tol, seed, "sizes must be positive");
    };
    let ts = tensor_algebra(&x, &y);
    if ts.total().sizes() != vec![1; p * q].as_slice() {
        return CheckReport::from_error(name, f64::INFINITY, tol, seed, Some("tensor of diagonal algebras is not diagonal".into()));
    }
    let mut rng = random::rng(seed);
    let mut res = Residual::new();
    for trial in 0..trials {
        let fs: Vec<AlgebraElement> = (0..terms).map(|_| random::random_element_with(&x, &mut rng)).collect();
        let gs: Vec<AlgebraElement> = (0..terms).map(|_| random::random_element_with(&y, &mut rng)).collect();
        let mut z = ts.total().zero();
        for (f, g) in fs.iter().zip(&gs) {
            z = z.add(&ts.tensor_elements(f, g).expect("shapes")).expect("shapes");
        }
        let mut grid: f64 = 0.0;
        for i in 0..p {
            for j in 0..q {
                let v: Complex64 = fs.iter().zip(&gs).map(|(f, g)| f.blocks[i][(0, 0)] * g.blocks[j][(0, 0)]).sum();
                grid = grid.max(v.norm());
            }
        }
        let d = (min_norm(&z) - grid).abs();
        res.record(d, || format!("trial {trial}: min_norm differs from grid max by {d:e}"));
    }
    res.report(name, tol, seed)
}
