//! Symmetric monoidal structure on multi-matrix algebras, and the check that
//! two different realizations of `A ⊗ B` are identified by the unique pair
//! of mediators.
//!
//! Associators, unitors and braidings send simple tensors of matrix units to
//! simple tensors of matrix units, so each is a coordinate permutation read
//! off from the `simple_coordinate` tables of the realizations involved.

use rand::Rng;

use crate::algebra::{numerical_rank, WStarAlgebra};
use crate::error::Result;
use crate::morphism::{compose, random_hom_with, verify_hom, StarHom};
use crate::random;
use crate::report::{CheckReport, Residual};
use crate::tensor::{tensor_algebra, tensor_homs, TensorLayout, TensorStructure};
use crate::CMatrix;

/// The unit object `ℂ`.
pub fn unit_object() -> WStarAlgebra {
    WStarAlgebra::complex()
}

pub fn canonical_realization(a: &WStarAlgebra, b: &WStarAlgebra) -> TensorStructure {
    TensorStructure::new(a, b, TensorLayout::Canonical)
}

pub fn flipped_realization(a: &WStarAlgebra, b: &WStarAlgebra) -> TensorStructure {
    TensorStructure::new(a, b, TensorLayout::Flipped)
}

/// Coordinate permutation `e_c ↦ e_{image(c)}`. Callers only pass maps that
/// carry simple tensors of matrix units to simple tensors of matrix units
/// with the factors rearranged, which are *-isomorphisms.
fn permutation_hom(source: &WStarAlgebra, target: &WStarAlgebra, image: impl Fn(usize) -> usize) -> StarHom {
    let mut map = CMatrix::zeros(target.dim(), source.dim());
    for c in 0..source.dim() {
        map[(image(c), c)] = 1.0.into();
    }
    StarHom::from_matrix(source.clone(), target.clone(), map)
        .expect("square permutation")
        .mark_verified(true)
}

/// `α: (A⊗B)⊗C → A⊗(B⊗C)` between arbitrary realizations.
pub fn associator_between(
    ab: &TensorStructure,
    ab_c: &TensorStructure,
    bc: &TensorStructure,
    a_bc: &TensorStructure,
) -> StarHom {
    let (a, b, c) = (ab.left().dim(), ab.right().dim(), bc.right().dim());
    let mut image = vec![0; ab_c.total().dim()];
    for p in 0..a {
        for q in 0..b {
            for r in 0..c {
                image[ab_c.simple_coordinate(ab.simple_coordinate(p, q), r)] =
                    a_bc.simple_coordinate(p, bc.simple_coordinate(q, r));
            }
        }
    }
    permutation_hom(ab_c.total(), a_bc.total(), |k| image[k])
}

/// `α^{-1}: A⊗(B⊗C) → (A⊗B)⊗C` between arbitrary realizations.
pub fn associator_inverse_between(
    ab: &TensorStructure,
    ab_c: &TensorStructure,
    bc: &TensorStructure,
    a_bc: &TensorStructure,
) -> StarHom {
    let (a, b, c) = (ab.left().dim(), ab.right().dim(), bc.right().dim());
    let mut image = vec![0; a_bc.total().dim()];
    for p in 0..a {
        for q in 0..b {
            for r in 0..c {
                image[a_bc.simple_coordinate(p, bc.simple_coordinate(q, r))] =
                    ab_c.simple_coordinate(ab.simple_coordinate(p, q), r);
            }
        }
    }
    permutation_hom(a_bc.total(), ab_c.total(), |k| image[k])
}

struct Triple {
    ab: TensorStructure,
    ab_c: TensorStructure,
    bc: TensorStructure,
    a_bc: TensorStructure,
}

fn triple(a: &WStarAlgebra, b: &WStarAlgebra, c: &WStarAlgebra) -> Triple {
    let ab = tensor_algebra(a, b);
    let bc = tensor_algebra(b, c);
    let ab_c = tensor_algebra(ab.total(), c);
    let a_bc = tensor_algebra(a, bc.total());
    Triple { ab, ab_c, bc, a_bc }
}

/// `α_{A,B,C}` on canonical realizations.
pub fn associator(a: &WStarAlgebra, b: &WStarAlgebra, c: &WStarAlgebra) -> StarHom {
    let t = triple(a, b, c);
    associator_between(&t.ab, &t.ab_c, &t.bc, &t.a_bc)
}

pub fn associator_inverse(a: &WStarAlgebra, b: &WStarAlgebra, c: &WStarAlgebra) -> StarHom {
    let t = triple(a, b, c);
    associator_inverse_between(&t.ab, &t.ab_c, &t.bc, &t.a_bc)
}

/// `(λ: ℂ⊗A → A, ρ: A⊗ℂ → A)` on canonical realizations.
pub fn unitors(a: &WStarAlgebra) -> (StarHom, StarHom) {
    let k = unit_object();
    let left = tensor_algebra(&k, a);
    let right = tensor_algebra(a, &k);
    let mut lam = vec![0; a.dim()];
    let mut rho = vec![0; a.dim()];
    for p in 0..a.dim() {
        lam[left.simple_coordinate(0, p)] = p;
        rho[right.simple_coordinate(p, 0)] = p;
    }
    (
        permutation_hom(left.total(), a, |k| lam[k]),
        permutation_hom(right.total(), a, |k| rho[k]),
    )
}

/// `σ: A⊗B → B⊗A`, `x⊗y ↦ y⊗x`, between arbitrary realizations.
pub fn braiding_between(ab: &TensorStructure, ba: &TensorStructure) -> StarHom {
    let mut image = vec![0; ab.total().dim()];
    for p in 0..ab.left().dim() {
        for q in 0..ab.right().dim() {
            image[ab.simple_coordinate(p, q)] = ba.simple_coordinate(q, p);
        }
    }
    permutation_hom(ab.total(), ba.total(), |k| image[k])
}

pub fn braiding(a: &WStarAlgebra, b: &WStarAlgebra) -> StarHom {
    braiding_between(&tensor_algebra(a, b), &tensor_algebra(b, a))
}

fn sizes_label(objs: &[&WStarAlgebra]) -> String {
    let parts: Vec<String> = objs.iter().map(|a| format!("{:?}", a.sizes())).collect();
    parts.join(", ")
}

fn record_distance(res: &mut Residual, what: &str, objs: &[&WStarAlgebra], lhs: &StarHom, rhs: &StarHom) -> Result<()> {
    let d = lhs.distance(rhs)?;
    res.record(d, || format!("{what} on ({}) deviates by {d:e}", sizes_label(objs)));
    Ok(())
}

/// Pentagon: `α_{A,B,C⊗D} ∘ α_{A⊗B,C,D} = (id ⊗ α_{B,C,D}) ∘ α_{A,B⊗C,D} ∘ (α_{A,B,C} ⊗ id)`.
pub fn pentagon_residual(a: &WStarAlgebra, b: &WStarAlgebra, c: &WStarAlgebra, d: &WStarAlgebra) -> Result<f64> {
    let ab = tensor_algebra(a, b);
    let cd = tensor_algebra(c, d);
    let bc = tensor_algebra(b, c);
    let lhs = compose(&associator(a, b, cd.total()), &associator(ab.total(), c, d))?;
    let rhs = compose(
        &tensor_homs(&StarHom::identity(a), &associator(b, c, d))?,
        &compose(
            &associator(a, bc.total(), d),
            &tensor_homs(&associator(a, b, c), &StarHom::identity(d))?,
        )?,
    )?;
    lhs.distance(&rhs)
}

/// Triangle: `(id_A ⊗ λ_B) ∘ α_{A,ℂ,B} = ρ_A ⊗ id_B`.
pub fn triangle_residual(a: &WStarAlgebra, b: &WStarAlgebra) -> Result<f64> {
    let k = unit_object();
    let (lam_b, _) = unitors(b);
    let (_, rho_a) = unitors(a);
    let lhs = compose(&tensor_homs(&StarHom::identity(a), &lam_b)?, &associator(a, &k, b))?;
    let rhs = tensor_homs(&rho_a, &StarHom::identity(b))?;
    lhs.distance(&rhs)
}

/// Both hexagons, returned as `(first, second)`.
pub fn hexagon_residuals(a: &WStarAlgebra, b: &WStarAlgebra, c: &WStarAlgebra) -> Result<(f64, f64)> {
    let bc = tensor_algebra(b, c);
    let ab = tensor_algebra(a, b);
    // (A⊗B)⊗C → B⊗(C⊗A)
    let lhs1 = compose(
        &associator(b, c, a),
        &compose(&braiding(a, bc.total()), &associator(a, b, c))?,
    )?;
    let rhs1 = compose(
        &tensor_homs(&StarHom::identity(b), &braiding(a, c))?,
        &compose(&associator(b, a, c), &tensor_homs(&braiding(a, b), &StarHom::identity(c))?)?,
    )?;
    // A⊗(B⊗C) → (C⊗A)⊗B
    let lhs2 = compose(
        &associator_inverse(c, a, b),
        &compose(&braiding(ab.total(), c), &associator_inverse(a, b, c))?,
    )?;
    let rhs2 = compose(
        &tensor_homs(&braiding(a, c), &StarHom::identity(b))?,
        &compose(
            &associator_inverse(a, c, b),
            &tensor_homs(&StarHom::identity(a), &braiding(b, c))?,
        )?,
    )?;
    Ok((lhs1.distance(&rhs1)?, lhs2.distance(&rhs2)?))
}

/// `σ_{B,A} ∘ σ_{A,B} = id`.
pub fn involution_residual(a: &WStarAlgebra, b: &WStarAlgebra) -> Result<f64> {
    let ab = tensor_algebra(a, b);
    compose(&braiding(b, a), &braiding(a, b))?.distance(&StarHom::identity(ab.total()))
}

/// `σ_{C,D} ∘ (f⊗g) = (g⊗f) ∘ σ_{A,B}` for `f: A → C`, `g: B → D`.
pub fn braiding_naturality_residual(f: &StarHom, g: &StarHom) -> Result<f64> {
    let lhs = compose(&braiding(f.target(), g.target()), &tensor_homs(f, g)?)?;
    let rhs = compose(&tensor_homs(g, f)?, &braiding(f.source(), g.source()))?;
    lhs.distance(&rhs)
}

/// `α ∘ ((f⊗g)⊗h) = (f⊗(g⊗h)) ∘ α`.
pub fn associator_naturality_residual(f: &StarHom, g: &StarHom, h: &StarHom) -> Result<f64> {
    let lhs = compose(
        &associator(f.target(), g.target(), h.target()),
        &tensor_homs(&tensor_homs(f, g)?, h)?,
    )?;
    let rhs = compose(
        &tensor_homs(f, &tensor_homs(g, h)?)?,
        &associator(f.source(), g.source(), h.source()),
    )?;
    lhs.distance(&rhs)
}

/// Objects used for exhaustive coherence checks: `O, ℂ, M_2, ℂ⊕ℂ, M_2⊕ℂ`.
pub fn fixed_objects() -> Vec<WStarAlgebra> {
    [&[][..], &[1], &[2], &[1, 1], &[2, 1]]
        .iter()
        .map(|s| WStarAlgebra::from_sizes(s).expect("positive sizes"))
        .collect()
}

/// Random object with at most 2 blocks of size at most 2.
pub fn random_object_with<R: Rng + ?Sized>(rng: &mut R) -> WStarAlgebra {
    let blocks = rng.random_range(1..=2);
    let sizes: Vec<usize> = (0..blocks).map(|_| rng.random_range(1..=2)).collect();
    WStarAlgebra::from_sizes(&sizes).expect("positive sizes")
}

/// Random 4-tuple whose fourfold tensor product has dimension at most `cap`.
pub fn random_tuple_with<R: Rng + ?Sized>(rng: &mut R, cap: usize) -> [WStarAlgebra; 4] {
    loop {
        let t = [
            random_object_with(rng),
            random_object_with(rng),
            random_object_with(rng),
            random_object_with(rng),
        ];
        if t.iter().map(WStarAlgebra::dim).product::<usize>() <= cap {
            return t;
        }
    }
}

/// Dimension cap for random 4-tuples.
pub const TUPLE_DIM_CAP: usize = 324;

fn check_triple(res: &mut Residual, a: &WStarAlgebra, b: &WStarAlgebra, c: &WStarAlgebra, rng: &mut random::WRng) -> Result<()> {
    let objs = [a, b, c];
    let alpha = associator(a, b, c);
    let r = verify_hom(&alpha, 0.0).max_error;
    res.record(r, || format!("associator not a *-homomorphism on ({}): {r:e}", sizes_label(&objs)));
    let t = triple(a, b, c);
    record_distance(
        res,
        "associator inverse",
        &objs,
        &compose(&associator_inverse(a, b, c), &alpha)?,
        &StarHom::identity(t.ab_c.total()),
    )?;
    let (h1, h2) = hexagon_residuals(a, b, c)?;
    res.record(h1, || format!("first hexagon on ({}) deviates by {h1:e}", sizes_label(&objs)));
    res.record(h2, || format!("second hexagon on ({}) deviates by {h2:e}", sizes_label(&objs)));
    let f = random_hom_with(a, a, rng);
    let g = random_hom_with(b, b, rng);
    let h = random_hom_with(c, c, rng);
    let n = associator_naturality_residual(&f, &g, &h)?;
    res.record(n, || format!("associator naturality on ({}) deviates by {n:e}", sizes_label(&objs)));
    Ok(())
}

fn check_pair(res: &mut Residual, a: &WStarAlgebra, b: &WStarAlgebra, c: &WStarAlgebra, d: &WStarAlgebra, rng: &mut random::WRng) -> Result<()> {
    let objs = [a, b];
    let s = braiding(a, b);
    let r = verify_hom(&s, 0.0).max_error;
    res.record(r, || format!("braiding not a *-homomorphism on ({}): {r:e}", sizes_label(&objs)));
    let v = involution_residual(a, b)?;
    res.record(v, || format!("braiding involution on ({}) deviates by {v:e}", sizes_label(&objs)));
    let t = triangle_residual(a, b)?;
    res.record(t, || format!("triangle on ({}) deviates by {t:e}", sizes_label(&objs)));
    let f = random_hom_with(a, c, rng);
    let g = random_hom_with(b, d, rng);
    let n = braiding_naturality_residual(&f, &g)?;
    res.record(n, || {
        format!("braiding naturality for maps ({}) deviates by {n:e}", sizes_label(&[a, b, c, d]))
    });
    Ok(())
}

fn check_unitors(res: &mut Residual, a: &WStarAlgebra, rng: &mut random::WRng) -> Result<()> {
    let (lam, rho) = unitors(a);
    for (name, u) in [("left unitor", &lam), ("right unitor", &rho)] {
        let r = verify_hom(u, 0.0).max_error;
        res.record(r, || format!("{name} not a *-homomorphism on {:?}: {r:e}", a.sizes()));
        let d = u.apply(u.source().unit())?.sub(a.unit())?.block_frobenius();
        res.record(d, || format!("{name} not unital on {:?}: {d:e}", a.sizes()));
        let x = random::random_element_with(u.source(), rng);
        let n = (u.apply(&x)?.op_norm() - x.op_norm()).abs() / x.op_norm().max(1.0);
        res.record(n, || format!("{name} not isometric on {:?}: {n:e}", a.sizes()));
    }
    Ok(())
}

/// Pentagon, triangle, hexagons, involution and naturality on all tuples
/// from [`fixed_objects`] (pentagon on tuples drawn from the nonzero objects
/// of dimension at most 4) plus `random_tuples` random 4-tuples.
pub fn coherence_check(random_tuples: usize, seed: u64, tol: f64) -> CheckReport {
    match coherence_residual(random_tuples, seed) {
        Ok(res) => res.report("coherence", tol, seed),
        Err(e) => CheckReport::errored("coherence", tol, seed, e.to_string()),
    }
}

fn coherence_residual(random_tuples: usize, seed: u64) -> Result<Residual> {
    let mut rng = random::rng(seed);
    let mut res = Residual::new();
    let objs = fixed_objects();
    for a in &objs {
        check_unitors(&mut res, a, &mut rng)?;
        for b in &objs {
            check_pair(&mut res, a, b, b, a, &mut rng)?;
            for c in &objs {
                check_triple(&mut res, a, b, c, &mut rng)?;
            }
        }
    }
    let small: Vec<&WStarAlgebra> = objs.iter().filter(|a| (1..=4).contains(&a.dim())).collect();
    for a in &small {
        for b in &small {
            for c in &small {
                for d in &small {
                    let p = pentagon_residual(a, b, c, d)?;
                    res.record(p, || format!("pentagon on ({}) deviates by {p:e}", sizes_label(&[a, b, c, d])));
                }
            }
        }
    }
    let zero = &objs[0];
    let p = pentagon_residual(zero, &objs[2], &objs[4], &objs[1])?;
    res.record(p, || format!("pentagon with the zero object deviates by {p:e}"));

    for _ in 0..random_tuples {
        let [a, b, c, d] = random_tuple_with(&mut rng, TUPLE_DIM_CAP);
        let p = pentagon_residual(&a, &b, &c, &d)?;
        res.record(p, || format!("pentagon on ({}) deviates by {p:e}", sizes_label(&[&a, &b, &c, &d])));
        check_unitors(&mut res, &a, &mut rng)?;
        check_pair(&mut res, &a, &b, &c, &d, &mut rng)?;
        check_triple(&mut res, &a, &b, &c, &mut rng)?;
    }
    Ok(res)
}

/// The canonical and flipped realizations of `A ⊗ B` are identified by
/// `f`: flipped → canonical (mediator of the canonical embeddings) and
/// `h`: canonical → flipped. Checks unitality of the embeddings and of
/// `f, h`, that both are *-homomorphisms, both composites are identities,
/// the embedding triangles commute, and that simple products of the
/// embeddings span the source (so the mediator is unique).
pub fn equivalence_check(a: &WStarAlgebra, b: &WStarAlgebra, tol: f64) -> CheckReport {
    match equivalence_residual(a, b) {
        Ok(res) => res.report("equivalence", tol, 0),
        Err(e) => CheckReport::errored("equivalence", tol, 0, e.to_string()),
    }
}

fn equivalence_residual(a: &WStarAlgebra, b: &WStarAlgebra) -> Result<Residual> {
    let canon = canonical_realization(a, b);
    let flip = flipped_realization(a, b);
    let mut res = Residual::new();
    for (tag, ts) in [("canonical", &canon), ("flipped", &flip)] {
        for (name, w) in [("w1", ts.w1()), ("w2", ts.w2())] {
            let d = w.apply(w.source().unit())?.sub(ts.total().unit())?.block_frobenius();
            res.record(d, || format!("{tag} {name} not unital (deviation {d:e})"));
        }
    }
    let f = flip.mediator(canon.w1(), canon.w2())?;
    let h = canon.mediator(flip.w1(), flip.w2())?;
    for (name, m, src, tgt) in [("f", &f, &flip, &canon), ("h", &h, &canon, &flip)] {
        let d = m.apply(src.total().unit())?.sub(tgt.total().unit())?.block_frobenius();
        res.record(d, || format!("{name} not unital (deviation {d:e})"));
        let v = verify_hom(m, 0.0).max_error;
        res.record(v, || format!("{name} not a *-homomorphism (deviation {v:e})"));
        for (side, wsrc, wtgt) in [("w1", src.w1(), tgt.w1()), ("w2", src.w2(), tgt.w2())] {
            let d = compose(m, wsrc)?.distance(wtgt)?;
            res.record(d, || format!("{name} ∘ {side} differs from {side} (deviation {d:e})"));
        }
        // uniqueness: products w1(e_p) w2(e_q) span the source
        let (w1, w2) = (src.w1().basis_images(), src.w2().basis_images());
        let dim = src.total().dim();
        let mut span = CMatrix::zeros(dim, a.dim() * b.dim());
        for (p, x) in w1.iter().enumerate() {
            for (q, y) in w2.iter().enumerate() {
                span.set_column(p * b.dim() + q, &x.mul(y)?.coords());
            }
        }
        let missing = (dim - numerical_rank(&span)) as f64;
        res.record(missing, || {
            format!("simple products miss {missing} dimensions of the source of {name}; mediator not unique")
        });
    }
    let fh = compose(&f, &h)?.distance(&StarHom::identity(canon.total()))?;
    res.record(fh, || format!("f ∘ h differs from the identity by {fh:e}"));
    let hf = compose(&h, &f)?.distance(&StarHom::identity(flip.total()))?;
    res.record(hf, || format!("h ∘ f differs from the identity by {hf:e}"));
    Ok(res)
}

/// Unordered pairs (with repetition) from `objects`.
pub fn unordered_pairs(objects: &[WStarAlgebra]) -> Vec<(WStarAlgebra, WStarAlgebra)> {
    let mut out = Vec::new();
    for i in 0..objects.len() {
        for j in i..objects.len() {
            out.push((objects[i].clone(), objects[j].clone()));
        }
    }
    out
}

/// The object set for the equivalence sweep: `O, ℂ, M_2, ℂ⊕ℂ, M_2⊕ℂ, M_3`.
pub fn equivalence_objects() -> Vec<WStarAlgebra> {
    let mut objs = fixed_objects();
    objs.push(WStarAlgebra::from_sizes(&[3]).expect("positive"));
    objs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;

    fn alg(sizes: &[i64]) -> WStarAlgebra {
        make_algebra(sizes).unwrap()
    }

    #[test]
    fn canonical_associator_is_identity() {
        let (a, b, c) = (alg(&[2, 1]), alg(&[2]), alg(&[1, 1]));
        let alpha = associator(&a, &b, &c);
        let t = triple(&a, &b, &c);
        assert_eq!(alpha.distance(&StarHom::identity(t.ab_c.total())).unwrap(), 0.0);
        let x = random::random_element(&a, 1);
        let y = random::random_element(&b, 2);
        let z = random::random_element(&c, 3);
        let lhs = t.ab_c.tensor_elements(&t.ab.tensor_elements(&x, &y).unwrap(), &z).unwrap();
        let rhs = t.a_bc.tensor_elements(&x, &t.bc.tensor_elements(&y, &z).unwrap()).unwrap();
        // products are rounded in a different order on the two sides
        assert!(alpha.apply(&lhs).unwrap().sub(&rhs).unwrap().block_frobenius() < 1e-14);
    }

    #[test]
    fn associator_isometric_and_unital() {
        let (a, b, c) = (alg(&[2]), alg(&[2, 1]), alg(&[1, 1]));
        let alpha = associator(&a, &b, &c);
        assert!(alpha.is_unital());
        assert!(verify_hom(&alpha, 1e-12).passed());
        let mut rng = random::rng(11);
        for _ in 0..100 {
            let x = random::random_element_with(alpha.source(), &mut rng);
            let d = (alpha.apply(&x).unwrap().op_norm() - x.op_norm()).abs();
            assert!(d <= 1e-12 * x.op_norm().max(1.0));
        }
    }

    #[test]
    fn pentagon_m2_m1_m2_m1() {
        let (m2, m1) = (alg(&[2]), alg(&[1]));
        assert_eq!(pentagon_residual(&m2, &m1, &m2, &m1).unwrap(), 0.0);
    }

    #[test]
    fn unitors_act_as_expected() {
        let a = alg(&[2, 1]);
        let k = unit_object();
        let (lam, rho) = unitors(&a);
        let x = random::random_element(&a, 4);
        let right = tensor_algebra(&a, &k);
        assert_eq!(rho.apply(&right.tensor_elements(&x, k.unit()).unwrap()).unwrap(), x);
        let c = k.unit().scale(num_complex::Complex64::new(2.0, -1.0));
        let left = tensor_algebra(&k, &a);
        let got = lam.apply(&left.tensor_elements(&c, &x).unwrap()).unwrap();
        let want = x.scale(num_complex::Complex64::new(2.0, -1.0));
        assert!(got.sub(&want).unwrap().block_frobenius() < 1e-14);
        assert!(lam.is_unital() && rho.is_unital());
    }

    #[test]
    fn braiding_swaps_simple_tensors() {
        let (a, b) = (alg(&[2, 1]), alg(&[3]));
        let s = braiding(&a, &b);
        assert!(verify_hom(&s, 1e-12).passed());
        let x = random::random_element(&a, 5);
        let y = random::random_element(&b, 6);
        let xy = tensor_algebra(&a, &b).tensor_elements(&x, &y).unwrap();
        let yx = tensor_algebra(&b, &a).tensor_elements(&y, &x).unwrap();
        assert!(s.apply(&xy).unwrap().sub(&yx).unwrap().block_frobenius() < 1e-12);
        assert_eq!(involution_residual(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn braiding_on_self_is_order_two() {
        let a = alg(&[2]);
        let s = braiding(&a, &a);
        let aa = tensor_algebra(&a, &a);
        assert!(s.distance(&StarHom::identity(aa.total())).unwrap() > 0.5);
        assert_eq!(compose(&s, &s).unwrap().distance(&StarHom::identity(aa.total())).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_braiding_transposes_grid() {
        let (a, b) = (alg(&[1, 1]), alg(&[1, 1, 1]));
        let s = braiding(&a, &b);
        // block (i,j) of A⊗B is coordinate 3i+j; block (j,i) of B⊗A is 2j+i
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(s.matrix()[(2 * j + i, 3 * i + j)].re, 1.0);
            }
        }
    }

    #[test]
    fn triangle_and_hexagons() {
        let (a, b, c) = (alg(&[2, 1]), alg(&[1, 1]), alg(&[2]));
        assert_eq!(triangle_residual(&a, &b).unwrap(), 0.0);
        let (h1, h2) = hexagon_residuals(&a, &b, &c).unwrap();
        assert_eq!((h1, h2), (0.0, 0.0));
    }

    #[test]
    fn naturality_with_random_maps() {
        let (a, b, c, d) = (alg(&[1, 1]), alg(&[2]), alg(&[2, 1]), alg(&[3]));
        let f = crate::morphism::random_hom(&a, &c, 1);
        let g = crate::morphism::random_hom(&b, &d, 2);
        assert!(braiding_naturality_residual(&f, &g).unwrap() <= 1e-10);
        let h = crate::morphism::random_hom(&a, &d, 3);
        assert!(associator_naturality_residual(&f, &g, &h).unwrap() <= 1e-10);
    }

    #[test]
    fn equivalence_trivial_and_shuffle() {
        let k = unit_object();
        assert!(equivalence_check(&k, &k, 1e-12).passed());
        let f = flipped_realization(&k, &k).mediator(tensor_algebra(&k, &k).w1(), tensor_algebra(&k, &k).w2()).unwrap();
        assert_eq!(f.distance(&StarHom::identity(&k)).unwrap(), 0.0);

        let (a, b) = (alg(&[2]), alg(&[3]));
        let r = equivalence_check(&a, &b, 1e-12);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.max_error, 0.0);
        let canon = canonical_realization(&a, &b);
        let f = flipped_realization(&a, &b).mediator(canon.w1(), canon.w2()).unwrap();
        assert_eq!(f.source().dim(), 36);
        assert!(f.distance(&StarHom::identity(canon.total())).unwrap() > 0.5);
    }

    #[test]
    fn equivalence_block_bijection() {
        let (a, b) = (alg(&[2, 1]), alg(&[2]));
        assert_eq!(canonical_realization(&a, &b).total().sizes(), &[4, 2]);
        assert_eq!(flipped_realization(&a, &b).total().sizes(), &[4, 2]);
        assert!(equivalence_check(&a, &b, 1e-12).passed());
        let (c, d) = (alg(&[1, 1]), alg(&[2, 1]));
        assert_eq!(canonical_realization(&c, &d).total().sizes(), &[2, 1, 2, 1]);
        assert_eq!(flipped_realization(&c, &d).total().sizes(), &[2, 2, 1, 1]);
        assert!(equivalence_check(&c, &d, 1e-12).passed());
    }

    #[test]
    fn equivalence_sweep() {
        let pairs = unordered_pairs(&equivalence_objects());
        assert_eq!(pairs.len(), 21);
        for (a, b) in pairs {
            let r = equivalence_check(&a, &b, 1e-12);
            assert!(r.passed(), "{:?} {:?}: {r:?}", a.sizes(), b.sizes());
        }
    }

    #[test]
    fn coherence_suite_passes() {
        let r = coherence_check(3, 9, 1e-12);
        assert!(r.passed(), "{r:?}");
    }
}
