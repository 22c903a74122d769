//! Named verification suites reachable from `check` directives.

use rand::Rng;

use crate::algebra::WStarAlgebra;
use crate::category::{product, projection_injection_residual, ProductStructure, ORTHOGONALITY_TOL};
use crate::duality::{annihilator, predual_tensor_check, subspace_dual_isometry, IdealSummand, LinearSubspace};
use crate::error::{Error, Result};
use crate::monoidal::{coherence_check, equivalence_check, random_object_with};
use crate::morphism::{compose, random_hom_with, verify_hom, Counts, MultiplicityData, StarHom};
use crate::random::{self, derive_seed, WRng};
use crate::report::{CheckReport, Residual};
use crate::tensor::{
    commutative_tensor_check, max_norm_lower_bound, min_norm, random_commuting_pair_with, tensor_algebra,
    BasisOrder, TensorStructure, PAIR_KINDS,
};
use crate::{CMatrix, C64};

/// Every suite name accepted by `check`.
pub const SUITE_NAMES: &[&str] = &[
    "cross_norm",
    "cstar_identity",
    "mediator_universal",
    "product_universal",
    "orthogonal_sum",
    "annihilator_duality",
    "predual_tensor",
    "coherence",
    "equivalence",
    "max_norm_bound",
    "commutative",
    "double_dual",
    "morphism_structure",
    "verify_hom",
];

/// A resolved argument of a `check` directive.
#[derive(Clone, Debug)]
pub enum SuiteArg {
    Algebra(WStarAlgebra),
    Tensor(TensorStructure),
    Product(ProductStructure),
    Hom(StarHom),
}

/// Kinds of script values, used for argument checking before a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Algebra,
    Tensor,
    Product,
    Hom,
}

impl SuiteArg {
    pub fn kind(&self) -> ArgKind {
        match self {
            SuiteArg::Algebra(_) => ArgKind::Algebra,
            SuiteArg::Tensor(_) => ArgKind::Tensor,
            SuiteArg::Product(_) => ArgKind::Product,
            SuiteArg::Hom(_) => ArgKind::Hom,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteParams {
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    /// Size of a deliberate orthogonality violation (`orthogonal_sum` only).
    pub inject: Option<f64>,
}

impl SuiteParams {
    pub fn new(seed: u64) -> Self {
        Self {
            trials: None,
            seed,
            tol: None,
            inject: None,
        }
    }
}

/// `(default trials, default tol)` per suite.
pub fn defaults(name: &str) -> Option<(usize, f64)> {
    Some(match name {
        "cross_norm" | "cstar_identity" | "predual_tensor" => (100, 1e-9),
        "mediator_universal" => (20, 1e-10),
        "product_universal" => (20, 1e-10),
        "orthogonal_sum" => (10, 1e-10),
        "annihilator_duality" | "double_dual" => (20, 1e-9),
        "coherence" => (10, 1e-12),
        "equivalence" => (1, 1e-12),
        "max_norm_bound" => (10, 1e-9),
        "commutative" => (20, 1e-12),
        "morphism_structure" => (20, 0.0),
        "verify_hom" => (1, 1e-10),
        _ => return None,
    })
}

/// Accepted argument shapes, for error messages and static checking.
pub fn signature(name: &str) -> &'static str {
    match name {
        "cross_norm" | "predual_tensor" | "max_norm_bound" | "mediator_universal" => "A B | T",
        "cstar_identity" => "A | A B | T",
        "product_universal" | "orthogonal_sum" => "A1 A2 ... | P",
        "annihilator_duality" | "double_dual" => "A",
        "coherence" => "(none)",
        "equivalence" | "commutative" => "A B",
        "morphism_structure" => "A B C",
        "verify_hom" => "f",
        _ => "?",
    }
}

/// Whether `kinds` is an accepted argument list for suite `name`.
pub fn accepts(name: &str, kinds: &[ArgKind]) -> bool {
    use ArgKind::*;
    let all_alg = kinds.iter().all(|k| *k == Algebra);
    match name {
        "cross_norm" | "predual_tensor" | "max_norm_bound" => {
            kinds == [Algebra, Algebra] || kinds == [Tensor]
        }
        "mediator_universal" => kinds == [Algebra, Algebra] || kinds == [Tensor] || kinds == [Hom, Hom],
        "cstar_identity" => kinds == [Algebra] || kinds == [Algebra, Algebra] || kinds == [Tensor],
        "product_universal" | "orthogonal_sum" => (!kinds.is_empty() && all_alg) || kinds == [Product],
        "annihilator_duality" | "double_dual" => kinds == [Algebra],
        "coherence" => kinds.is_empty(),
        "equivalence" | "commutative" => kinds == [Algebra, Algebra],
        "morphism_structure" => kinds == [Algebra, Algebra, Algebra],
        "verify_hom" => kinds == [Hom],
        _ => false,
    }
}

/// Runs suite `name`. Module errors become `status = error` reports.
pub fn run_suite(name: &str, args: &[SuiteArg], params: &SuiteParams) -> CheckReport {
    let Some((default_trials, default_tol)) = defaults(name) else {
        return CheckReport::errored(name, 0.0, params.seed, format!("unknown suite {name}"));
    };
    let trials = params.trials.unwrap_or(default_trials);
    let tol = params.tol.unwrap_or(default_tol);
    let seed = params.seed;
    let kinds: Vec<ArgKind> = args.iter().map(SuiteArg::kind).collect();
    if !accepts(name, &kinds) {
        return CheckReport::errored(
            name,
            tol,
            seed,
            format!("arguments {kinds:?} do not match {}", signature(name)),
        );
    }
    let out = match name {
        "cross_norm" => cross_norm(&tensor_of(args), trials, seed, tol),
        "cstar_identity" => Ok(cstar_identity(&cstar_algebra(args), trials, seed, tol)),
        "mediator_universal" => match args {
            [SuiteArg::Hom(t1), SuiteArg::Hom(t2)] => mediator_for_pair(t1, t2, seed, tol),
            _ => Ok(mediator_universal(&tensor_of(args), trials, seed, tol)),
        },
        "product_universal" => product_universal(&product_of(args), trials, seed, tol),
        "orthogonal_sum" => orthogonal_sum(&product_of(args), trials, seed, tol, params.inject),
        "annihilator_duality" => annihilator_duality(algebra(&args[0]), trials, seed, tol),
        "predual_tensor" => Ok(predual_tensor_check(&tensor_of(args), trials, seed, tol)),
        "coherence" => Ok(coherence_check(trials, seed, tol)),
        "equivalence" => Ok(equivalence_check(algebra(&args[0]), algebra(&args[1]), tol).with_seed(seed)),
        "max_norm_bound" => max_norm_bound(&tensor_of(args), trials, seed, tol),
        "commutative" => commutative(algebra(&args[0]), algebra(&args[1]), trials, seed, tol),
        "double_dual" => crate::duality::double_dual_check(algebra(&args[0]), trials, seed, tol),
        "morphism_structure" => morphism_structure(algebra(&args[0]), algebra(&args[1]), algebra(&args[2]), trials, seed, tol),
        "verify_hom" => match &args[0] {
            SuiteArg::Hom(f) => Ok(verify_hom(f, tol).with_seed(seed)),
            _ => unreachable!("checked by accepts"),
        },
        _ => unreachable!("defaults covers every suite"),
    };
    match out {
        Ok(r) => r.renamed(name),
        Err(e) => CheckReport::errored(name, tol, seed, e.to_string()),
    }
}

fn algebra(arg: &SuiteArg) -> &WStarAlgebra {
    match arg {
        SuiteArg::Algebra(a) => a,
        _ => unreachable!("checked by accepts"),
    }
}

fn tensor_of(args: &[SuiteArg]) -> TensorStructure {
    match args {
        [SuiteArg::Tensor(t)] => t.clone(),
        [a, b] => tensor_algebra(algebra(a), algebra(b)),
        _ => unreachable!("checked by accepts"),
    }
}

fn cstar_algebra(args: &[SuiteArg]) -> WStarAlgebra {
    match args {
        [SuiteArg::Algebra(a)] => a.clone(),
        _ => tensor_of(args).total().clone(),
    }
}

fn product_of(args: &[SuiteArg]) -> ProductStructure {
    match args {
        [SuiteArg::Product(p)] => p.clone(),
        _ => product(&args.iter().map(|a| algebra(a).clone()).collect::<Vec<_>>()),
    }
}

fn residual_from(res: &mut Residual, report: &CheckReport) {
    let w = report.witness.clone().unwrap_or_else(|| report.name.clone());
    res.record(report.max_error, || w);
}

/// `|‖x⊗y‖ − ‖x‖‖y‖|` relative to `‖x‖‖y‖`.
pub fn cross_norm(ts: &TensorStructure, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = random::rng(seed);
    let mut res = Residual::new();
    for k in 0..trials {
        let x = random::random_element_with(ts.left(), &mut rng);
        let y = random::random_element_with(ts.right(), &mut rng);
        let lhs = ts.tensor_elements(&x, &y)?.op_norm();
        let rhs = x.op_norm() * y.op_norm();
        let d = if rhs > 0.0 { (lhs - rhs).abs() / rhs } else { lhs };
        res.record(d, || format!("trial {k}: ‖x⊗y‖ = {lhs} but ‖x‖‖y‖ = {rhs}"));
    }
    Ok(res.report("cross_norm", tol, seed))
}

/// `|‖z*z‖ − ‖z‖²|` relative to `‖z‖²`.
pub fn cstar_identity(alg: &WStarAlgebra, trials: usize, seed: u64, tol: f64) -> CheckReport {
    let mut rng = random::rng(seed);
    let mut res = Residual::new();
    for k in 0..trials {
        let z = random::random_element_with(alg, &mut rng);
        let n2 = z.op_norm().powi(2);
        let lhs = z.adjoint().mul(&z).expect("same shape").op_norm();
        let d = if n2 > 0.0 { (lhs - n2).abs() / n2 } else { lhs };
        res.record(d, || format!("trial {k}: ‖z*z‖ = {lhs} but ‖z‖² = {n2}"));
    }
    res.report("cstar_identity", tol, seed)
}

/// Residuals of the universal property over random commuting pairs.
#[derive(Clone, Debug, Default)]
pub struct MediatorResiduals {
    /// `verify_hom` residual of the mediator.
    pub hom: Residual,
    /// Weak and (where applicable) strict triangles.
    pub triangles: Residual,
    /// Agreement with the mediator built in the other basis order, the
    /// defining values on simple tensors, and the spanning deficit.
    pub uniqueness: Residual,
}

impl MediatorResiduals {
    fn merged(self) -> Residual {
        let mut r = self.hom;
        r.merge(self.triangles);
        r.merge(self.uniqueness);
        r
    }
}

fn mediator_residuals_into(out: &mut MediatorResiduals, ts: &TensorStructure, t1: &StarHom, t2: &StarHom, label: &str) -> Result<()> {
    let t = ts.mediator(t1, t2)?;
    let v = verify_hom(&t, 0.0).max_error;
    out.hom.record(v, || format!("{label}: mediator not a *-homomorphism ({v:e})"));
    let tri = ts.mediator_triangles(&t, t1, t2, 0.0)?;
    let w = format!("{label}: {}", tri.witness.clone().unwrap_or_default());
    out.triangles.record(tri.max_error, || w);

    let other = ts.mediator_in_order(t1, t2, BasisOrder::RightMajor)?;
    let d = t.distance(&other)?;
    out.uniqueness.record(d, || format!("{label}: mediators built in two orders differ by {d:e}"));
    let (w1, w2) = (ts.w1().basis_images(), ts.w2().basis_images());
    let (a, b) = (t1.basis_images(), t2.basis_images());
    let dim = ts.total().dim();
    let mut span = CMatrix::zeros(dim, w1.len() * w2.len());
    for (p, x) in w1.iter().enumerate() {
        for (q, y) in w2.iter().enumerate() {
            let simple = x.mul(y)?;
            span.set_column(p * w2.len() + q, &simple.coords());
            let d = t.apply(&simple)?.sub(&a[p].mul(&b[q])?)?.block_frobenius();
            out.uniqueness.record(d, || format!("{label}: t(w1(e_{p}) w2(e_{q})) != t1(e_{p}) t2(e_{q})"));
        }
    }
    let missing = (dim - crate::algebra::numerical_rank(&span)) as f64;
    out.uniqueness
        .record(missing, || format!("{label}: simple tensors miss {missing} dimensions"));
    Ok(())
}

/// The mediator of `trials` random commuting pairs, cycling through the
/// pair constructions.
pub fn mediator_residuals(ts: &TensorStructure, trials: usize, seed: u64) -> Result<MediatorResiduals> {
    let mut rng = random::rng(seed);
    let mut out = MediatorResiduals::default();
    for k in 0..trials {
        let kind = PAIR_KINDS[k % PAIR_KINDS.len()];
        let (t1, t2) = random_commuting_pair_with(ts, kind, &mut rng);
        mediator_residuals_into(&mut out, ts, &t1, &t2, &format!("trial {k} ({kind:?})"))?;
    }
    Ok(out)
}

pub fn mediator_universal(ts: &TensorStructure, trials: usize, seed: u64, tol: f64) -> CheckReport {
    match mediator_residuals(ts, trials, seed) {
        Ok(r) => r.merged().report("mediator_universal", tol, seed),
        Err(e) => CheckReport::errored("mediator_universal", tol, seed, e.to_string()),
    }
}

fn mediator_for_pair(t1: &StarHom, t2: &StarHom, seed: u64, tol: f64) -> Result<CheckReport> {
    let ts = tensor_algebra(t1.source(), t2.source());
    let mut out = MediatorResiduals::default();
    mediator_residuals_into(&mut out, &ts, t1, t2, "given pair")?;
    Ok(out.merged().report("mediator_universal", tol, seed))
}

/// `p_i ∘ u = u_i` for random families out of random sources, plus the
/// projection/injection identities.
pub fn product_universal(ps: &ProductStructure, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = random::rng(seed);
    let mut res = Residual::new();
    let pi = projection_injection_residual(ps);
    res.record(pi, || format!("projection/injection identities deviate by {pi:e}"));
    for k in 0..trials {
        let source = random_object_with(&mut rng);
        let maps: Vec<StarHom> = ps.factors().iter().map(|a| random_hom_with(&source, a, &mut rng)).collect();
        let u = ps.product_mediator(&source, &maps)?;
        let v = verify_hom(&u, 0.0).max_error;
        res.record(v, || format!("trial {k}: product mediator not a *-homomorphism ({v:e})"));
        for (i, (p, ui)) in ps.projections().iter().zip(&maps).enumerate() {
            let d = compose(p, &u)?.distance(ui)?;
            res.record(d, || format!("trial {k}: p_{i} ∘ u differs from u_{i} by {d:e}"));
        }
    }
    Ok(res.report("product_universal", tol, seed))
}

/// A family `u_i: A_i → M_N` with pairwise orthogonal ranges: each factor
/// is moved by a random inner automorphism, injected into the product, and
/// the product is embedded diagonally into one conjugated matrix block.
///
/// With `inject = Some(ε)`, the first map is additionally conjugated by a
/// rotation of angle `ε` mixing its corner with the next factor's corner.
pub fn orthogonal_family_with(
    ps: &ProductStructure,
    inject: Option<f64>,
    rng: &mut WRng,
) -> Result<(WStarAlgebra, Vec<StarHom>)> {
    let prod = ps.product();
    let total: usize = prod.sizes().iter().sum();
    let n = (total + rng.random_range(0..=1)).max(1);
    let target = WStarAlgebra::from_sizes(&[n])?;
    let w = random::haar_unitary(rng, n);
    let diag = StarHom::from_multiplicity(
        prod,
        &target,
        &MultiplicityData {
            counts: Counts(vec![vec![1; prod.num_blocks()]]),
            unitaries: vec![w.clone()],
        },
    )?;
    let mut maps = Vec::with_capacity(ps.factors().len());
    for (a, s) in ps.factors().iter().zip(ps.injections()) {
        let inner = StarHom::from_multiplicity(
            a,
            a,
            &MultiplicityData {
                counts: Counts::identity(a.num_blocks()),
                unitaries: a.sizes().iter().map(|&m| random::haar_unitary(rng, m)).collect(),
            },
        )?;
        maps.push(compose(&diag, &compose(s, &inner)?)?);
    }
    if let Some(eps) = inject {
        let first: usize = ps.factors().first().map_or(0, |a| a.sizes().iter().sum());
        let second: usize = ps.factors().get(1).map_or(0, |a| a.sizes().iter().sum());
        if first == 0 || second == 0 {
            return Err(Error::StructureMismatch(
                "an injected violation needs two nonzero leading factors".into(),
            ));
        }
        // rotation in the plane of the first basis vectors of the two corners
        let mut r = CMatrix::identity(n, n);
        let (c, s) = (eps.cos(), eps.sin());
        r[(0, 0)] = C64::new(c, 0.0);
        r[(first, first)] = C64::new(c, 0.0);
        r[(0, first)] = C64::new(-s, 0.0);
        r[(first, 0)] = C64::new(s, 0.0);
        let v = &w * r * w.adjoint();
        let rot = StarHom::from_multiplicity(
            &target,
            &target,
            &MultiplicityData {
                counts: Counts::identity(1),
                unitaries: vec![v],
            },
        )?;
        maps[0] = compose(&rot, &maps[0])?;
    }
    Ok((target, maps))
}

/// Orthogonal families have a mediator `u` with `u ∘ s_i = u_i`. With an
/// injected violation the precondition check must reject the family, which
/// is reported as a failure carrying the violation size.
pub fn orthogonal_sum(ps: &ProductStructure, trials: usize, seed: u64, tol: f64, inject: Option<f64>) -> Result<CheckReport> {
    let mut rng = random::rng(seed);
    let mut res = Residual::new();
    for k in 0..trials {
        let (target, maps) = orthogonal_family_with(ps, inject, &mut rng)?;
        let u = match ps.orthogonal_sum_mediator(&target, &maps, ORTHOGONALITY_TOL) {
            Ok(u) => u,
            Err(
                e @ Error::RangesNotOrthogonal {
                    magnitude, ..
                },
            ) => {
                res.record(magnitude, || format!("trial {k}: {e}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let v = verify_hom(&u, 0.0).max_error;
        res.record(v, || format!("trial {k}: orthogonal sum not a *-homomorphism ({v:e})"));
        for (i, (s, ui)) in ps.injections().iter().zip(&maps).enumerate() {
            let d = compose(&u, s)?.distance(ui)?;
            res.record(d, || format!("trial {k}: u ∘ s_{i} differs from u_{i} by {d:e}"));
        }
    }
    Ok(res.report("orthogonal_sum", tol, seed))
}

/// The isometric identities on every ideal summand, and the dimension
/// identity plus vanishing pairing on random subspaces of every dimension.
pub fn annihilator_duality(alg: &WStarAlgebra, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut res = Residual::new();
    let k = alg.num_blocks();
    for mask in 0u64..(1 << k) {
        let m = IdealSummand::new(alg, (0..k).filter(|b| mask >> b & 1 == 1))?;
        let r = subspace_dual_isometry(&m, trials, derive_seed(seed, mask), tol)?;
        residual_from(&mut res, &r);
    }
    let mut rng = random::rng(seed);
    let d = alg.dim();
    for dim in 0..=d {
        let y = LinearSubspace::span(&random::gaussian_matrix(&mut rng, d, dim));
        let perp = annihilator(alg, &y)?;
        if y.dim() + perp.dim() != d {
            res.record(f64::INFINITY, || {
                format!("dim Y = {}, dim Y^⊥ = {}, ambient {d}", y.dim(), perp.dim())
            });
        }
        for i in 0..perp.dim() {
            let b = alg.functional_from_coords(&perp.basis().column(i).into_owned())?;
            for j in 0..y.dim() {
                let v = alg.element_from_coords(&y.basis().column(j).into_owned())?;
                let leak = b.pair(&v)?.norm();
                res.record(leak, || format!("random subspace of dim {dim}: annihilator leaks {leak:e}"));
            }
        }
    }
    Ok(res.report("annihilator_duality", tol, seed))
}

/// Commuting pairs used by the max-norm bound: `pairs` random ones.
pub fn random_pairs(ts: &TensorStructure, pairs: usize, rng: &mut WRng) -> Vec<(StarHom, StarHom)> {
    (0..pairs)
        .map(|k| random_commuting_pair_with(ts, PAIR_KINDS[k % PAIR_KINDS.len()], rng))
        .collect()
}

/// Number of random commuting pairs per max-norm check.
pub const MAX_NORM_PAIRS: usize = 20;

/// Relative residuals `(with faithful pair, without)`: the first is
/// `|bound − min_norm|`, the second the excess `max(0, bound − min_norm)`.
pub fn max_norm_residuals(ts: &TensorStructure, trials: usize, seed: u64) -> Result<(Residual, Residual)> {
    let mut rng = random::rng(seed);
    let pairs = random_pairs(ts, MAX_NORM_PAIRS, &mut rng);
    let mut with_faithful = pairs.clone();
    with_faithful.push((ts.w1().clone(), ts.w2().clone()));
    let (mut with, mut without) = (Residual::new(), Residual::new());
    for k in 0..trials {
        let z = random::random_element_with(ts.total(), &mut rng);
        let mn = min_norm(&z);
        let scale = mn.max(1.0);
        let b = max_norm_lower_bound(ts, &z, &with_faithful)?;
        let d = (b - mn).abs() / scale;
        with.record(d, || format!("probe {k}: bound with faithful pair {b} vs min norm {mn}"));
        let b0 = max_norm_lower_bound(ts, &z, &pairs)?;
        let e = (b0 - mn).max(0.0) / scale;
        without.record(e, || format!("probe {k}: random pairs reach {b0} above min norm {mn}"));
    }
    Ok((with, without))
}

pub fn max_norm_bound(ts: &TensorStructure, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let (mut with, without) = max_norm_residuals(ts, trials, seed)?;
    with.merge(without);
    Ok(with.report("max_norm_bound", tol, seed))
}

fn commutative(a: &WStarAlgebra, b: &WStarAlgebra, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    for alg in [a, b] {
        if alg.sizes().iter().any(|&n| n != 1) {
            return Err(Error::StructureMismatch(format!("{:?} is not diagonal", alg.sizes())));
        }
    }
    Ok(commutative_tensor_check(a.num_blocks(), b.num_blocks(), 3, trials, seed, tol))
}

/// Round trip `from_multiplicity(canonical_form(f))` and multiplicity
/// functoriality `c(g∘f) = c(g) c(f)` on random `f: A → B`, `g: B → C`.
/// Count mismatches are recorded as 1.
pub fn morphism_structure(
    a: &WStarAlgebra,
    b: &WStarAlgebra,
    c: &WStarAlgebra,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let mut rng = random::rng(seed);
    let mut res = Residual::new();
    for k in 0..trials {
        let f = random_hom_with(a, b, &mut rng);
        let g = random_hom_with(b, c, &mut rng);
        let cf = f.canonical_form()?;
        let rebuilt = StarHom::from_multiplicity(a, b, &MultiplicityData::with_identity_unitaries(cf.clone(), b))?;
        let again = rebuilt.canonical_form()?;
        res.record(f64::from(u8::from(again != cf)), || {
            format!("trial {k}: counts {:?} came back as {:?}", cf.0, again.0)
        });
        let cg = g.canonical_form()?;
        let cgf = compose(&g, &f)?.canonical_form()?;
        let expected = cg.compose(&cf, a.num_blocks());
        res.record(f64::from(u8::from(cgf != expected)), || {
            format!("trial {k}: c(g∘f) = {:?} but c(g)c(f) = {:?}", cgf.0, expected.0)
        });
    }
    Ok(res.report("morphism_structure", tol, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::report::Status;

    fn alg(sizes: &[i64]) -> WStarAlgebra {
        make_algebra(sizes).unwrap()
    }

    fn a(sizes: &[i64]) -> SuiteArg {
        SuiteArg::Algebra(alg(sizes))
    }

    #[test]
    fn every_suite_has_defaults() {
        for name in SUITE_NAMES {
            assert!(defaults(name).is_some(), "{name}");
        }
        assert!(defaults("nope").is_none());
    }

    #[test]
    fn cross_norm_m2_m3() {
        let r = run_suite("cross_norm", &[a(&[2]), a(&[3])], &SuiteParams { trials: Some(100), seed: 7, tol: Some(1e-9), inject: None });
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.seed, 7);
    }

    #[test]
    fn wrong_arguments_error() {
        let r = run_suite("equivalence", &[a(&[2])], &SuiteParams::new(0));
        assert_eq!(r.status, Status::Error);
    }

    #[test]
    fn small_suites_pass() {
        let p = SuiteParams::new(3);
        for (name, args) in [
            ("cstar_identity", vec![a(&[2, 1]), a(&[2])]),
            ("mediator_universal", vec![a(&[2, 1]), a(&[1, 1])]),
            ("product_universal", vec![a(&[2]), a(&[1, 1])]),
            ("orthogonal_sum", vec![a(&[2]), a(&[1, 1]), a(&[1])]),
            ("annihilator_duality", vec![a(&[2, 1])]),
            ("predual_tensor", vec![a(&[2]), a(&[2, 1])]),
            ("equivalence", vec![a(&[2, 1]), a(&[2])]),
            ("max_norm_bound", vec![a(&[2]), a(&[1, 1])]),
            ("commutative", vec![a(&[1, 1, 1]), a(&[1, 1])]),
            ("double_dual", vec![a(&[2, 1])]),
            ("morphism_structure", vec![a(&[2, 1]), a(&[3, 2]), a(&[4])]),
        ] {
            let r = run_suite(name, &args, &p);
            assert!(r.passed(), "{name}: {r:?}");
            assert_eq!(r.name, name);
        }
    }

    #[test]
    fn injected_orthogonality_violation_fails() {
        let params = SuiteParams {
            inject: Some(1e-6),
            trials: Some(3),
            ..SuiteParams::new(5)
        };
        let r = run_suite("orthogonal_sum", &[a(&[2]), a(&[1, 1])], &params);
        assert_eq!(r.status, Status::Fail);
        assert!(r.max_error > 1e-7 && r.max_error < 1e-5, "{r:?}");
        assert!(r.witness.unwrap().contains("not orthogonal"));
    }

    #[test]
    fn non_commuting_hom_pair_is_an_error_report() {
        let m2 = alg(&[2]);
        let id = StarHom::identity(&m2);
        let r = run_suite("mediator_universal", &[SuiteArg::Hom(id.clone()), SuiteArg::Hom(id)], &SuiteParams::new(0));
        assert_eq!(r.status, Status::Error);
    }
}
