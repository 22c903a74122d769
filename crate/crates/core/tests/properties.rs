use proptest::prelude::*;

use wstar::morphism::{compose, random_hom, verify_hom, MultiplicityData};
use wstar::random;
use wstar::script::{parse, pretty_print, Script, Statement, UnitarySpec};
use wstar::tensor::{tensor_algebra, tensor_homs};
use wstar::{StarHom, WStarAlgebra, C64};

fn sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 0..=3)
}

fn nonzero_sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=3)
}

fn alg(s: &[usize]) -> WStarAlgebra {
    WStarAlgebra::from_sizes(s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cstar_identity(s in nonzero_sizes(), seed in any::<u64>()) {
        let x = random::random_element(&alg(&s), seed);
        let n = x.op_norm();
        let lhs = x.adjoint().mul(&x).unwrap().op_norm();
        prop_assert!((lhs - n * n).abs() <= 1e-12 * n * n);
    }

    #[test]
    fn submultiplicative(s in nonzero_sizes(), seed in any::<u64>()) {
        let a = alg(&s);
        let x = random::random_element(&a, seed);
        let y = random::random_element(&a, seed.wrapping_add(1));
        prop_assert!(x.mul(&y).unwrap().op_norm() <= x.op_norm() * y.op_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn pairing_bounded_by_norms(s in nonzero_sizes(), seed in any::<u64>()) {
        let a = alg(&s);
        let x = random::random_element(&a, seed);
        let phi = random::random_functional(&a, seed.wrapping_add(7));
        let v = phi.pair(&x).unwrap().norm();
        prop_assert!(v <= phi.tr_norm() * x.op_norm() * (1.0 + 1e-12));
        // equality at the norming functional
        let nf = x.norming_functional();
        prop_assert!((nf.pair(&x).unwrap().norm() - x.op_norm()).abs() <= 1e-12 * x.op_norm());
        prop_assert!((nf.tr_norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn random_homs_verify(s in sizes(), t in sizes(), seed in any::<u64>()) {
        let f = random_hom(&alg(&s), &alg(&t), seed);
        prop_assert!(verify_hom(&f, 1e-10).passed());
    }

    #[test]
    fn homs_are_contractive(s in nonzero_sizes(), t in sizes(), seed in any::<u64>()) {
        let (a, b) = (alg(&s), alg(&t));
        let f = random_hom(&a, &b, seed);
        let x = random::random_element(&a, seed ^ 0x5555);
        prop_assert!(f.apply(&x).unwrap().op_norm() <= x.op_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn canonical_round_trip(s in sizes(), t in sizes(), seed in any::<u64>()) {
        let (a, b) = (alg(&s), alg(&t));
        let f = random_hom(&a, &b, seed);
        let c = f.canonical_form().unwrap();
        let g = StarHom::from_multiplicity(&a, &b, &MultiplicityData::with_identity_unitaries(c.clone(), &b)).unwrap();
        prop_assert_eq!(g.canonical_form().unwrap(), c);
    }

    #[test]
    fn multiplicity_functoriality(s in sizes(), t in sizes(), u in sizes(), seed in any::<u64>()) {
        let (a, b, c) = (alg(&s), alg(&t), alg(&u));
        let f = random_hom(&a, &b, seed);
        let g = random_hom(&b, &c, seed.wrapping_mul(31).wrapping_add(1));
        let cgf = compose(&g, &f).unwrap().canonical_form().unwrap();
        let expected = g.canonical_form().unwrap().compose(&f.canonical_form().unwrap(), a.num_blocks());
        prop_assert_eq!(cgf, expected);
    }

    #[test]
    fn tensor_of_homs_is_functorial(s in nonzero_sizes(), t in nonzero_sizes(), seed in any::<u64>()) {
        let (a, b) = (alg(&s), alg(&t));
        let f1 = random_hom(&a, &a, seed);
        let f2 = random_hom(&a, &a, seed ^ 1);
        let g1 = random_hom(&b, &b, seed ^ 2);
        let g2 = random_hom(&b, &b, seed ^ 3);
        let lhs = tensor_homs(&compose(&f2, &f1).unwrap(), &compose(&g2, &g1).unwrap()).unwrap();
        let rhs = compose(&tensor_homs(&f2, &g2).unwrap(), &tensor_homs(&f1, &g1).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-10);
        let ts = tensor_algebra(&a, &b);
        prop_assert!(tensor_homs(&StarHom::identity(&a), &StarHom::identity(&b)).unwrap()
            .distance(&StarHom::identity(ts.total())).unwrap() == 0.0);
    }
}

fn ident() -> impl Strategy<Value = String> {
    "[A-Za-z_][A-Za-z0-9_]{0,6}".prop_filter("not a keyword", |s| {
        ![
            "algebra", "elem", "hom", "tensor", "product", "mediator", "check", "report", "in", "mult", "unitary",
            "default", "mediate", "json",
        ]
        .contains(&s.as_str())
    })
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, Just(0.0), Just(-0.0), Just(1e-300), Just(3.0e20)]
}

fn statement() -> impl Strategy<Value = Statement> {
    let complex = (finite(), finite()).prop_map(|(re, im)| C64::new(re, im));
    prop_oneof![
        (ident(), prop::collection::vec(1usize..=9, 0..4)).prop_map(|(name, sizes)| Statement::Algebra { name, sizes }),
        (ident(), ident(), prop::collection::vec(prop::collection::vec(prop::collection::vec(complex, 1..3), 1..3), 1..3))
            .prop_map(|(name, algebra, blocks)| Statement::Elem { name, algebra, blocks }),
        (ident(), ident(), ident(), prop::collection::vec(prop::collection::vec(0usize..4, 0..3), 0..3), prop::option::of(ident()))
            .prop_map(|(name, source, target, counts, u)| Statement::Hom {
                name,
                source,
                target,
                counts,
                unitary: u.map_or(UnitarySpec::Default, UnitarySpec::Named),
            }),
        (ident(), ident(), ident()).prop_map(|(name, left, right)| Statement::Tensor { name, left, right }),
        (ident(), prop::collection::vec(ident(), 1..4)).prop_map(|(name, factors)| Statement::Product { name, factors }),
        (ident(), ident(), ident()).prop_map(|(name, left, right)| Statement::Mediator { name, left, right }),
        (
            ident(),
            prop::collection::vec(ident(), 0..3),
            prop::option::of(0usize..1000),
            prop::option::of(any::<u64>()),
            prop::option::of(0.0..1.0f64),
            prop::option::of(0.0..1.0f64),
        )
            .prop_map(|(suite, args, trials, seed, tol, inject)| Statement::Check { suite, args, trials, seed, tol, inject }),
        "[a-z0-9_/.]{1,12}".prop_map(|path| Statement::Report { path }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn script_round_trip(stmts in prop::collection::vec(statement(), 0..8)) {
        let script = Script::new(stmts);
        let text = pretty_print(&script);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, script);
    }
}
