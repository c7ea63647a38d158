//! Randomized invariants: boundary and differential squaring to zero,
//! exact Stokes pairing, realization intertwining and the 2D model
//! family.

use std::sync::Arc;

use proptest::prelude::*;

use psigma_core::worldsheet::{
    integrate, stokes_check, worldsheet_vars, DeRhamSuperfield, Superchain,
};
use psigma_core::{
    build_operation_context, evaluate_configuration, gallery, ratio, worldsheet::FieldConfiguration,
    Polynomial, Rational, SuperPolynomial, VariableSet,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn poly(vars: Arc<VariableSet>, max_degree: u32) -> impl Strategy<Value = Polynomial> {
    let n = vars.names().len();
    prop::collection::vec(
        (prop::collection::vec(0..=max_degree, n), rational()),
        0..5,
    )
    .prop_map(move |terms| {
        let mut acc = Polynomial::zero(&vars);
        for (exps, c) in terms {
            let mut mono = Polynomial::constant(&vars, c);
            for (i, e) in exps.iter().enumerate() {
                let v = Polynomial::var(&vars, &vars.names()[i].clone()).unwrap();
                mono = mono.mul(&v.pow(*e)).unwrap();
            }
            acc = acc.add(&mono).unwrap();
        }
        acc
    })
}

fn superfield(degree: i64) -> impl Strategy<Value = DeRhamSuperfield> {
    let p = move || poly(worldsheet_vars(), 4);
    (p(), p(), p(), p()).prop_map(move |(a, b, c, d)| {
        DeRhamSuperfield::from_components(degree, a, [b, c], d)
    })
}

fn vertex() -> impl Strategy<Value = [Rational; 2]> {
    (rational(), rational()).prop_map(|(a, b)| [a, b])
}

fn chain() -> impl Strategy<Value = Superchain> {
    (
        prop::collection::vec((-2i64..=2, vertex()), 0..3),
        prop::collection::vec((-2i64..=2, vertex(), vertex()), 0..3),
        prop::collection::vec((-2i64..=2, vertex(), vertex(), vertex()), 0..3),
    )
        .prop_map(|(pts, segs, tris)| {
            let mut c = Superchain::new();
            for (w, p) in pts {
                c = c.point(w, p);
            }
            for (w, a, b) in segs {
                c = c.segment(w, a, b);
            }
            for (w, a, b, v) in tris {
                c = c.triangle(w, a, b, v);
            }
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn boundary_squares_to_zero(c in chain()) {
        prop_assert!(c.boundary().is_cycle());
    }

    #[test]
    fn differential_squares_to_zero(psi in superfield(0)) {
        prop_assert!(psi.d().d().is_zero());
    }

    #[test]
    fn stokes_equality_is_exact(psi in superfield(1), c in chain()) {
        prop_assert!(stokes_check(&psi, &c).unwrap().passed());
        prop_assert_eq!(
            integrate(&psi.d(), &c).unwrap(),
            integrate(&psi, &c.boundary()).unwrap()
        );
    }

    #[test]
    fn product_rule_for_the_differential(
        a in superfield(0),
        b in superfield(1),
    ) {
        // d(ab) = (da)b + (-1)^|a| a (db) with |a| even here.
        let lhs = a.mul(&b).unwrap().d();
        let rhs = a.d().mul(&b).unwrap().add(&a.mul(&b.d()).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }
}

fn random_element(
    ctx: &psigma_core::OperationContext,
    picks: &[(usize, usize, i64)],
) -> SuperPolynomial {
    let table = ctx.table();
    let names: Vec<&str> = vec![
        "x1", "x2", "x3", "y1", "y2", "y3", "Xt1", "Xt2", "Xt3", "Yt1", "Yt2", "Yt3", "gamma1",
        "Gamma1",
    ];
    let mut acc = SuperPolynomial::zero(table);
    let mut parity = None;
    for (i, j, c) in picks {
        let a = SuperPolynomial::generator(table, names[i % names.len()]).unwrap();
        let b = SuperPolynomial::generator(table, names[j % names.len()]).unwrap();
        let term = a.mul(&b).unwrap().scale(&Rational::from_integer((*c).into()));
        // Keep the element parity-homogeneous so its realization has a
        // well-defined product sign.
        let Some(deg) = term.homogeneous_degree() else { continue };
        let p = deg % 2;
        match parity {
            None => parity = Some(p),
            Some(q) if q != p => continue,
            _ => {}
        }
        acc = acc.add(&term).unwrap();
    }
    acc
}

fn random_config(
    ctx: &psigma_core::OperationContext,
    evens: Vec<Polynomial>,
    odds: Vec<(Polynomial, Polynomial)>,
) -> FieldConfiguration {
    let vars = worldsheet_vars();
    let mut cfg = FieldConfiguration::zeros(ctx, &vars);
    for (i, c) in ctx.model().coords().iter().enumerate() {
        cfg.assign(
            c.clone(),
            DeRhamSuperfield::from_components(
                0,
                evens[i % evens.len()].clone(),
                [Polynomial::zero(&vars), Polynomial::zero(&vars)],
                Polynomial::zero(&vars),
            ),
        );
    }
    let mut odd_fields = Vec::new();
    for (p, q) in &odds {
        odd_fields.push(DeRhamSuperfield::from_components(
            1,
            Polynomial::zero(&vars),
            [p.clone(), q.clone()],
            Polynomial::zero(&vars),
        ));
    }
    for (i, y) in ctx.y_names().iter().enumerate() {
        cfg.assign(y.clone(), odd_fields[i % odd_fields.len()].clone());
    }
    for (a, g) in ctx.gamma_names().iter().enumerate() {
        cfg.assign(g.clone(), odd_fields[(a + 1) % odd_fields.len()].clone());
    }
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn realization_intertwines_the_differentials(
        picks in prop::collection::vec((0usize..14, 0usize..14, -3i64..=3), 1..4),
        evens in prop::collection::vec(poly(worldsheet_vars(), 2), 1..4),
        odds in prop::collection::vec(
            (poly(worldsheet_vars(), 2), poly(worldsheet_vars(), 2)),
            1..4,
        ),
    ) {
        let b = gallery::r2_gravity();
        let ctx = build_operation_context(&b.model, &b.liealg, &b.action, false).unwrap();
        let elem = random_element(&ctx, &picks);
        let cfg = random_config(&ctx, evens, odds);
        let de = ctx.d_derivation().apply(&elem).unwrap();
        let lhs = evaluate_configuration(&ctx, &de, &cfg).unwrap();
        let rhs = evaluate_configuration(&ctx, &elem, &cfg).unwrap().d();
        prop_assert_eq!(lhs.psi0(), rhs.psi0());
        prop_assert_eq!(lhs.psi1(), rhs.psi1());
        prop_assert_eq!(lhs.psi2(), rhs.psi2());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn planar_bivectors_always_commute(
        mu in poly(VariableSet::coords(["x1", "x2"]), 3),
        nu in poly(VariableSet::coords(["x1", "x2"]), 3),
    ) {
        // Any two bivectors on a 2-dimensional chart Schouten commute,
        // so every such pair forms a valid model.
        let b = gallery::two_d(&mu.to_string(), &nu.to_string()).unwrap();
        prop_assert!(b.model.model_structure_check().unwrap().passed());
    }
}
