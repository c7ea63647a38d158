//! Bundled example models: the valid gallery used throughout the test
//! suite and the negative controls that must fail their checks.

use crate::error::Result;
use crate::parser::parse_expression;
use crate::poisson::PoissonModel;
use crate::polynomial::{Polynomial, VariableSet};
use crate::rational::rat;
use crate::symmetry::{build_kks_model, ActionSpec, LieAlgebra};

#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub model: PoissonModel,
    pub liealg: LieAlgebra,
    pub action: ActionSpec,
}

/// so3 linear bivector with the compatible quadratic cocycle term;
/// abelian symmetry generated by the cubic Casimir.
pub fn r2_gravity() -> ModelBundle {
    let vars = VariableSet::coords(["x1", "x2", "x3"]);
    let e = |s: &str| parse_expression(s, &vars).unwrap();
    let model = PoissonModel::new(
        "r2_gravity",
        ["x1", "x2", "x3"],
        Vec::<String>::new(),
        &[(0, 1, e("x3")), (1, 2, e("x1")), (2, 0, e("x2"))],
        Some(&[(0, 1, e("1/2 - (x3 + 1/2)^2"))]),
    )
    .unwrap();
    let h1 = parse_expression(
        "1/2*(x1^2 + x2^2) - 1/3*x3*(x3^2 - 3/4)",
        model.vars(),
    )
    .unwrap();
    ModelBundle {
        model,
        liealg: LieAlgebra::abelian(["t1"]),
        action: ActionSpec::Hamilton(vec![h1]),
    }
}

/// Quadratic-linear structure on (x1,x2,x3,y) with symbolic constants
/// a1,a2,a3; abelian rank-2 symmetry from the two known Casimirs.
pub fn sklyanin() -> ModelBundle {
    let vars = VariableSet::new(["x1", "x2", "x3", "y"], ["a1", "a2", "a3"]);
    let e = |s: &str| parse_expression(s, &vars).unwrap();
    let model = PoissonModel::new(
        "sklyanin",
        ["x1", "x2", "x3", "y"],
        ["a1", "a2", "a3"],
        &[
            (0, 1, e("x3*y")),
            (1, 2, e("x1*y")),
            (2, 0, e("x2*y")),
        ],
        Some(&[
            (0, 3, e("2*(a2 - a3)*x2*x3")),
            (1, 3, e("2*(a3 - a1)*x3*x1")),
            (2, 3, e("2*(a1 - a2)*x1*x2")),
        ]),
    )
    .unwrap();
    let f1 = parse_expression(
        "1/2*(a1*x1^2 + a2*x2^2 + a3*x3^2) - 1/4*y^2",
        model.vars(),
    )
    .unwrap();
    let f2 = parse_expression("1/2*(x1^2 + x2^2 + x3^2)", model.vars()).unwrap();
    ModelBundle {
        model,
        liealg: LieAlgebra::abelian(["t1", "t2"]),
        action: ActionSpec::Hamilton(vec![f1, f2]),
    }
}

/// Affine linear model on (x0..x3) with parameter a; abelian symmetry
/// from the quadratic Casimir.
pub fn affine_kks() -> ModelBundle {
    let coords: Vec<String> = ["x0", "x1", "x2", "x3"].map(String::from).to_vec();
    let vars = VariableSet::new(coords.clone(), vec!["a".to_string()]);
    let a_poly = Polynomial::var(&vars, "a").unwrap();
    let model = build_kks_model(
        "affine_kks",
        coords,
        vec!["a".to_string()],
        &[(0, 1, 2, rat(1)), (0, 2, 3, rat(1))],
        &[(0, 1, a_poly)],
    )
    .unwrap();
    let h1 = parse_expression("x1*x3 - 1/2*(x2 + a)^2", model.vars()).unwrap();
    ModelBundle {
        model,
        liealg: LieAlgebra::abelian(["t1"]),
        action: ActionSpec::Hamilton(vec![h1]),
    }
}

/// Degenerate pi = varpi context: so3 bivector alone with its
/// quadratic Casimir as abelian action.
pub fn so3_casimir() -> ModelBundle {
    let vars = VariableSet::coords(["x1", "x2", "x3"]);
    let e = |s: &str| parse_expression(s, &vars).unwrap();
    let model = PoissonModel::new(
        "so3_casimir",
        ["x1", "x2", "x3"],
        Vec::<String>::new(),
        &[(0, 1, e("x3")), (1, 2, e("x1")), (2, 0, e("x2"))],
        None,
    )
    .unwrap();
    let h1 = parse_expression("1/2*(x1^2 + x2^2 + x3^2)", model.vars()).unwrap();
    ModelBundle {
        model,
        liealg: LieAlgebra::abelian(["t1"]),
        action: ActionSpec::Hamilton(vec![h1]),
    }
}

/// Planar model with arbitrary polynomial densities mu, nu; every
/// such pair is automatically Poisson and compatible (any 3-vector in
/// two coordinates vanishes).
pub fn two_d(mu: &str, nu: &str) -> Result<ModelBundle> {
    let vars = VariableSet::coords(["x1", "x2"]);
    let mu = parse_expression(mu, &vars)?;
    let nu = parse_expression(nu, &vars)?;
    let model = PoissonModel::new(
        "two_d",
        ["x1", "x2"],
        Vec::<String>::new(),
        &[(0, 1, mu)],
        Some(&[(0, 1, nu)]),
    )?;
    Ok(ModelBundle {
        model,
        liealg: LieAlgebra::abelian(Vec::<String>::new()),
        action: ActionSpec::Hamilton(vec![]),
    })
}

/// Negative control: so3 with one rotated entry, breaking Jacobi.
pub fn broken_jacobi() -> ModelBundle {
    let vars = VariableSet::coords(["x1", "x2", "x3"]);
    let e = |s: &str| parse_expression(s, &vars).unwrap();
    let model = PoissonModel::new(
        "broken_jacobi",
        ["x1", "x2", "x3"],
        Vec::<String>::new(),
        &[(0, 1, e("x3")), (1, 2, e("x1")), (2, 0, e("x1"))],
        None,
    )
    .unwrap();
    ModelBundle {
        model,
        liealg: LieAlgebra::abelian(Vec::<String>::new()),
        action: ActionSpec::Hamilton(vec![]),
    }
}

/// Negative control: so3 varpi with an incompatible theta.
pub fn broken_compat() -> ModelBundle {
    let vars = VariableSet::coords(["x1", "x2", "x3"]);
    let e = |s: &str| parse_expression(s, &vars).unwrap();
    let model = PoissonModel::new(
        "broken_compat",
        ["x1", "x2", "x3"],
        Vec::<String>::new(),
        &[(0, 1, e("x3")), (1, 2, e("x1")), (2, 0, e("x2"))],
        Some(&[(0, 1, e("x1"))]),
    )
    .unwrap();
    ModelBundle {
        model,
        liealg: LieAlgebra::abelian(Vec::<String>::new()),
        action: ActionSpec::Hamilton(vec![]),
    }
}

/// Negative control: r2-gravity structure with h_1 = x1, which is not
/// a pi-Casimir, so the action check and the downstream identities
/// that depend on it must fail.
pub fn broken_action() -> ModelBundle {
    let mut bundle = r2_gravity();
    let x1 = Polynomial::var(bundle.model.vars(), "x1").unwrap();
    bundle.action = ActionSpec::Hamilton(vec![x1]);
    bundle
}

/// Negative control: structure constants violating antisymmetry.
pub fn broken_liealg() -> ModelBundle {
    let mut bundle = so3_casimir();
    bundle.liealg = LieAlgebra::new(["t1"], &[(0, 0, 0, rat(1))]);
    bundle
}

/// All bundled valid contexts with a Hamilton action.
pub fn valid_bundles() -> Vec<ModelBundle> {
    vec![r2_gravity(), sklyanin(), affine_kks(), so3_casimir()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::Bivector;
    use crate::symmetry::{verify_action, verify_lie_algebra};

    #[test]
    fn valid_gallery_passes_structure_and_action() {
        for b in valid_bundles() {
            assert!(
                b.model.model_structure_check().unwrap().passed(),
                "structure of {}",
                b.model.name()
            );
            assert!(verify_lie_algebra(&b.liealg).passed());
            assert!(
                verify_action(&b.model, &b.liealg, &b.action).unwrap().passed(),
                "action of {}",
                b.model.name()
            );
        }
    }

    #[test]
    fn sklyanin_bracket_example() {
        // {x1,y} under theta carries the literal double-sum factor 2
        let b = sklyanin();
        let x1 = Polynomial::var(b.model.vars(), "x1").unwrap();
        let y = Polynomial::var(b.model.vars(), "y").unwrap();
        let expected = parse_expression("2*(a2 - a3)*x2*x3", b.model.vars()).unwrap();
        assert_eq!(
            b.model.poisson_bracket(&x1, &y, Bivector::Theta).unwrap(),
            expected
        );
    }

    #[test]
    fn sklyanin_common_casimir() {
        let b = sklyanin();
        let ActionSpec::Hamilton(h) = &b.action else { unreachable!() };
        for which in [Bivector::Varpi, Bivector::Theta, Bivector::Pi] {
            assert!(b.model.verify_casimir(&h[1], which).unwrap().passed());
        }
        assert!(b.model.verify_casimir(&h[0], Bivector::Pi).unwrap().passed());
    }

    #[test]
    fn kks_hamilton_example() {
        // u_{x1} has components (-x2, 0, 0, 0)
        let b = affine_kks();
        let x1 = Polynomial::var(b.model.vars(), "x1").unwrap();
        let u = b.model.hamilton_vector_field(&x1, Bivector::Varpi).unwrap();
        assert_eq!(
            b.model.component(&u, &[0]).unwrap(),
            Polynomial::var(b.model.vars(), "x2").unwrap().neg()
        );
        for i in 1..4 {
            assert!(b.model.component(&u, &[i]).unwrap().is_zero());
        }
    }

    #[test]
    fn two_d_models_always_valid() {
        for (mu, nu) in [
            ("x1^2 - x2", "x1*x2"),
            ("1 + x1^3", "x2^2 - 3*x1"),
            ("0", "x1"),
        ] {
            let b = two_d(mu, nu).unwrap();
            assert!(b.model.model_structure_check().unwrap().passed());
        }
    }

    #[test]
    fn negative_controls_fail() {
        assert!(!broken_jacobi().model.model_structure_check().unwrap().passed());
        assert!(!broken_compat().model.model_structure_check().unwrap().passed());
        let b = broken_action();
        assert!(!verify_action(&b.model, &b.liealg, &b.action).unwrap().passed());
        assert!(!verify_lie_algebra(&broken_liealg().liealg).passed());
    }

    #[test]
    fn hamilton_fields_represent_the_algebra() {
        // [u_{h_a}, u_{h_b}] = c^c_ab u_{h_c} for all valid bundles
        for b in valid_bundles() {
            let ActionSpec::Hamilton(h) = &b.action else { unreachable!() };
            let us: Vec<_> = h
                .iter()
                .map(|f| b.model.hamilton_vector_field(f, Bivector::Varpi).unwrap())
                .collect();
            for (ai, ua) in us.iter().enumerate() {
                for (bi, ub) in us.iter().enumerate() {
                    let lhs = b.model.schouten_bracket(ua, ub).unwrap();
                    let mut rhs = crate::super_poly::SuperPolynomial::zero(b.model.table());
                    for (ci, uc) in us.iter().enumerate() {
                        rhs = rhs
                            .add(&uc.scale(b.liealg.structure_constant(ai, bi, ci)))
                            .unwrap();
                    }
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn pi_invariant_under_hamilton_action() {
        // [u_{h_a}, pi] = 0 for actions passing the pi-casimir check
        for b in valid_bundles() {
            let ActionSpec::Hamilton(h) = &b.action else { unreachable!() };
            let pi = b.model.bivector_element(Bivector::Pi);
            for f in h {
                let u = b.model.hamilton_vector_field(f, Bivector::Varpi).unwrap();
                assert!(b.model.schouten_bracket(&u, &pi).unwrap().is_zero());
            }
        }
    }
}
