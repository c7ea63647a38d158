//! Poisson geometry on a single chart: bivectors, the odd bracket on
//! multivectors, Poisson brackets, Hamilton vector fields, the
//! Lichnerowicz differential, Casimir verification and search.
//!
//! A p-vector is represented as a superpolynomial of pure y-degree p,
//! beta = (1/p!) beta^{i1..ip} y_{i1}..y_{ip}; component read-off and
//! the bracket normalization are pinned by the convention-lock tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polynomial::{Polynomial, VariableSet};
use crate::rational::Rational;
use crate::report::{CheckItem, CheckReport};
use crate::super_poly::{GenKind, GeneratorDef, GeneratorTable, SuperPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bivector {
    Varpi,
    Theta,
    Pi,
}

impl Bivector {
    pub fn label(self) -> &'static str {
        match self {
            Bivector::Varpi => "varpi",
            Bivector::Theta => "theta",
            Bivector::Pi => "pi",
        }
    }
}

/// Odd bracket of multivectors represented in (x, y). The inputs are
/// split into y-homogeneous parts of degrees p and q; on each pair
///
/// ```text
/// [A,B] = (-1)^(q+1) (dA/dy_i)(dB/dx^i) + (-1)^(pq-q+1) (dB/dy_i)(dA/dx^i)
/// ```
///
/// with left odd derivatives and products in the written order. The
/// normalization is fixed by requiring the literal component formulas
/// for [w,f], [w,u], [w,t] (locked by tests); with it, the self-bracket
/// of a 2-vector has components twice the Jacobiator.
pub fn schouten_bracket_in(
    a: &SuperPolynomial,
    b: &SuperPolynomial,
    coords: &[String],
    ys: &[String],
) -> Result<SuperPolynomial> {
    let table = a.table();
    let mask = table.odd_mask(ys);
    let mut out = SuperPolynomial::zero(table);
    for (p, ap) in a.split_by_family_count(mask) {
        for (q, bq) in b.split_by_family_count(mask) {
            let s1 = if (q + 1) % 2 == 1 { -1 } else { 1 };
            let s2 = if (p * q + q + 1) % 2 == 1 { -1 } else { 1 };
            for (yi, xi) in ys.iter().zip(coords) {
                let t1 = ap.partial_odd(yi)?.mul(&bq.partial_even(xi)?)?;
                let t2 = bq.partial_odd(yi)?.mul(&ap.partial_even(xi)?)?;
                let t1 = if s1 < 0 { t1.neg() } else { t1 };
                let t2 = if s2 < 0 { t2.neg() } else { t2 };
                out = out.add(&t1)?.add(&t2)?;
            }
        }
    }
    Ok(out)
}

/// Extract the pure even part as a commutative polynomial over `vars`.
pub fn to_polynomial(sp: &SuperPolynomial, vars: &Arc<VariableSet>) -> Result<Polynomial> {
    let mut out = Polynomial::zero(vars);
    for (even, odd, coeff) in sp.terms_named() {
        if !odd.is_empty() {
            continue;
        }
        let mut term = Polynomial::constant(vars, coeff);
        for (name, k) in even {
            term = term.mul(&Polynomial::var(vars, &name)?.pow(k))?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Chart with two antisymmetric bivectors w (varpi) and optional t
/// (theta); p (pi) is their sum.
#[derive(Debug, Clone)]
pub struct PoissonModel {
    name: String,
    coords: Vec<String>,
    params: Vec<String>,
    vars: Arc<VariableSet>,
    table: Arc<GeneratorTable>,
    varpi: Vec<Vec<Polynomial>>,
    theta: Option<Vec<Vec<Polynomial>>>,
}

fn antisymmetric_matrix(
    n: usize,
    vars: &Arc<VariableSet>,
    entries: &[(usize, usize, Polynomial)],
) -> Result<Vec<Vec<Polynomial>>> {
    let mut m = vec![vec![Polynomial::zero(vars); n]; n];
    let mut set = vec![vec![false; n]; n];
    for (i, j, p) in entries {
        let (i, j) = (*i, *j);
        if i == j && !p.is_zero() {
            return Err(Error::NotAntisymmetric(format!("({},{})", i + 1, j + 1)));
        }
        if set[i][j] {
            return Err(Error::NotAntisymmetric(format!(
                "({},{}) set twice",
                i + 1,
                j + 1
            )));
        }
        set[i][j] = true;
        set[j][i] = true;
        m[i][j] = p.clone();
        m[j][i] = p.neg();
    }
    Ok(m)
}

impl PoissonModel {
    /// Build from upper-triangle entries (i, j, w^{ij}); the lower
    /// triangle is the antisymmetric completion. Indices are 0-based.
    pub fn new(
        name: impl Into<String>,
        coords: impl IntoIterator<Item = impl Into<String>>,
        params: impl IntoIterator<Item = impl Into<String>>,
        varpi: &[(usize, usize, Polynomial)],
        theta: Option<&[(usize, usize, Polynomial)]>,
    ) -> Result<Self> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        let vars = VariableSet::new(coords.clone(), params.clone());
        let n = coords.len();
        let mut entries = Vec::new();
        for c in &coords {
            entries.push(GeneratorDef {
                name: c.clone(),
                degree: 0,
                kind: GenKind::Coordinate,
            });
        }
        for p in &params {
            entries.push(GeneratorDef {
                name: p.clone(),
                degree: 0,
                kind: GenKind::Parameter,
            });
        }
        for i in 0..n {
            entries.push(GeneratorDef {
                name: format!("y{}", i + 1),
                degree: 1,
                kind: GenKind::Field,
            });
        }
        let table = GeneratorTable::new(entries);
        let varpi = antisymmetric_matrix(n, &vars, varpi)?;
        let theta = theta
            .map(|t| antisymmetric_matrix(n, &vars, t))
            .transpose()?;
        Ok(PoissonModel {
            name: name.into(),
            coords,
            params,
            vars,
            table,
            varpi,
            theta,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn vars(&self) -> &Arc<VariableSet> {
        &self.vars
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn has_theta(&self) -> bool {
        self.theta.is_some()
    }

    pub fn y_names(&self) -> Vec<String> {
        (0..self.coords.len()).map(|i| format!("y{}", i + 1)).collect()
    }

    pub fn varpi_matrix(&self) -> &Vec<Vec<Polynomial>> {
        &self.varpi
    }

    pub fn theta_matrix(&self) -> Option<&Vec<Vec<Polynomial>>> {
        self.theta.as_ref()
    }

    /// Component matrix of the chosen bivector; theta defaults to 0.
    pub fn bivector_matrix(&self, which: Bivector) -> Vec<Vec<Polynomial>> {
        let n = self.coords.len();
        let zero = vec![vec![Polynomial::zero(&self.vars); n]; n];
        match which {
            Bivector::Varpi => self.varpi.clone(),
            Bivector::Theta => self.theta.clone().unwrap_or(zero),
            Bivector::Pi => {
                let mut m = self.varpi.clone();
                if let Some(t) = &self.theta {
                    for i in 0..n {
                        for j in 0..n {
                            m[i][j] = m[i][j].add(&t[i][j]).expect("same vars");
                        }
                    }
                }
                m
            }
        }
    }

    /// The bivector as the degree-2 element (1/2) b^{ij} y_i y_j.
    pub fn bivector_element(&self, which: Bivector) -> SuperPolynomial {
        self.matrix_element(&self.bivector_matrix(which))
    }

    fn matrix_element(&self, m: &[Vec<Polynomial>]) -> SuperPolynomial {
        let n = self.coords.len();
        let mut out = SuperPolynomial::zero(&self.table);
        for i in 0..n {
            for j in (i + 1)..n {
                if m[i][j].is_zero() {
                    continue;
                }
                let c = SuperPolynomial::from_polynomial(&self.table, &m[i][j]).expect("vars");
                let yi = self.y(i);
                let yj = self.y(j);
                out = out
                    .add(&c.mul(&yi).expect("t").mul(&yj).expect("t"))
                    .expect("t");
            }
        }
        out
    }

    fn y(&self, i: usize) -> SuperPolynomial {
        SuperPolynomial::generator(&self.table, &format!("y{}", i + 1)).expect("y generator")
    }

    pub fn lift(&self, f: &Polynomial) -> Result<SuperPolynomial> {
        SuperPolynomial::from_polynomial(&self.table, f)
    }

    pub fn schouten_bracket(
        &self,
        a: &SuperPolynomial,
        b: &SuperPolynomial,
    ) -> Result<SuperPolynomial> {
        schouten_bracket_in(a, b, &self.coords, &self.y_names())
    }

    /// Component beta^{i1..ip} of a p-vector: successive left
    /// derivatives by y_{i1}, .., y_{ip}, then the y-free part.
    pub fn component(&self, z: &SuperPolynomial, indices: &[usize]) -> Result<Polynomial> {
        let mut acc = z.clone();
        for &i in indices {
            acc = acc.partial_odd(&format!("y{}", i + 1))?;
        }
        to_polynomial(&acc, &self.vars)
    }

    /// {f,g} = b^{ij} d_i f d_j g.
    pub fn poisson_bracket(
        &self,
        f: &Polynomial,
        g: &Polynomial,
        which: Bivector,
    ) -> Result<Polynomial> {
        let m = self.bivector_matrix(which);
        let n = self.coords.len();
        let mut out = Polynomial::zero(&self.vars);
        for i in 0..n {
            let di = f.partial_derivative(&self.coords[i])?;
            if di.is_zero() {
                continue;
            }
            for j in 0..n {
                if m[i][j].is_zero() {
                    continue;
                }
                let dj = g.partial_derivative(&self.coords[j])?;
                out = out.add(&m[i][j].mul(&di)?.mul(&dj)?)?;
            }
        }
        Ok(out)
    }

    /// u_f = -[b,f], components u_f^i = -b^{ij} d_j f.
    pub fn hamilton_vector_field(
        &self,
        f: &Polynomial,
        which: Bivector,
    ) -> Result<SuperPolynomial> {
        let b = self.bivector_element(which);
        Ok(self.schouten_bracket(&b, &self.lift(f)?)?.neg())
    }

    /// q z = [b,z], the degree +1 Lichnerowicz operator.
    pub fn lichnerowicz_differential(
        &self,
        z: &SuperPolynomial,
        which: Bivector,
    ) -> Result<SuperPolynomial> {
        let b = self.bivector_element(which);
        self.schouten_bracket(&b, z)
    }

    /// Casimir test: all components b^{ij} d_j f must vanish.
    pub fn verify_casimir(&self, f: &Polynomial, which: Bivector) -> Result<CheckReport> {
        let m = self.bivector_matrix(which);
        let n = self.coords.len();
        let mut report = CheckReport::new(format!(
            "casimir check of `{}` against {}",
            f,
            which.label()
        ));
        for i in 0..n {
            let mut comp = Polynomial::zero(&self.vars);
            for j in 0..n {
                if !m[i][j].is_zero() {
                    comp = comp.add(&m[i][j].mul(&f.partial_derivative(&self.coords[j])?)?)?;
                }
            }
            let label = format!("component i={}", i + 1);
            report.push(if comp.is_zero() {
                CheckItem::pass(label)
            } else {
                CheckItem::fail(label, comp.to_string())
            });
        }
        Ok(report)
    }

    /// Basis of the space of polynomial Casimirs of total degree at
    /// most `max_degree` (in coordinates and parameters jointly),
    /// by an exact nullspace computation over the monomial basis.
    pub fn casimir_search(&self, which: Bivector, max_degree: u32) -> Result<Vec<Polynomial>> {
        let monomials = enumerate_monomials(self.vars.len(), max_degree);
        let m = self.bivector_matrix(which);
        let n = self.coords.len();
        // rows keyed by (component index, result monomial)
        let mut row_index: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (col, exps) in monomials.iter().enumerate() {
            let f = monomial(&self.vars, exps);
            for i in 0..n {
                let mut comp = Polynomial::zero(&self.vars);
                for j in 0..n {
                    if !m[i][j].is_zero() {
                        comp =
                            comp.add(&m[i][j].mul(&f.partial_derivative(&self.coords[j])?)?)?;
                    }
                }
                for (e, c) in comp.terms() {
                    let key = (i, e.clone());
                    let row = *row_index.entry(key).or_insert_with(|| {
                        rows.push(vec![Rational::zero(); monomials.len()]);
                        rows.len() - 1
                    });
                    rows[row][col] = c.clone();
                }
            }
        }
        let basis = linalg::nullspace(&rows, monomials.len());
        let mut out = Vec::new();
        for v in basis {
            let mut p = Polynomial::zero(&self.vars);
            for (col, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    p = p.add(&monomial(&self.vars, &monomials[col]).scale(c))?;
                }
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Structural identities: [w,w] = 0, and when theta is present
    /// [t,t] = 0 and [w,t] = 0. Witnesses are Jacobiator components.
    pub fn model_structure_check(&self) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!("structure check of model `{}`", self.name));
        let w = self.bivector_element(Bivector::Varpi);
        report.push(self.bracket_item("[varpi,varpi] = 0", &w, &w, true)?);
        if self.theta.is_some() {
            let t = self.bivector_element(Bivector::Theta);
            report.push(self.bracket_item("[theta,theta] = 0", &t, &t, true)?);
            report.push(self.bracket_item("[varpi,theta] = 0", &w, &t, false)?);
        }
        Ok(report)
    }

    fn bracket_item(
        &self,
        label: &str,
        a: &SuperPolynomial,
        b: &SuperPolynomial,
        halve: bool,
    ) -> Result<CheckItem> {
        let br = self.schouten_bracket(a, b)?;
        if br.is_zero() {
            return Ok(CheckItem::pass(label));
        }
        // first nonzero Jacobiator component as witness
        let n = self.coords.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut comp = self.component(&br, &[i, j, k])?;
                    if halve {
                        comp = comp.scale(&crate::rational::ratio(1, 2));
                    }
                    if !comp.is_zero() {
                        return Ok(CheckItem::fail(
                            label,
                            format!("({},{},{}): {}", i + 1, j + 1, k + 1, comp),
                        ));
                    }
                }
            }
        }
        Ok(CheckItem::fail(label, br.to_string()))
    }

    /// Poisson-vector-field condition for a 1-vector u: [w,u] = 0.
    pub fn poisson_vector_field_check(&self, u: &SuperPolynomial) -> Result<CheckReport> {
        let mut report = CheckReport::new("Poisson vector field check".to_string());
        let w = self.bivector_element(Bivector::Varpi);
        let br = self.schouten_bracket(&w, u)?;
        report.push(if br.is_zero() {
            CheckItem::pass("[varpi,u] = 0")
        } else {
            CheckItem::fail("[varpi,u] = 0", br.to_string())
        });
        Ok(report)
    }
}

fn monomial(vars: &Arc<VariableSet>, exps: &[u32]) -> Polynomial {
    let mut p = Polynomial::one(vars);
    for (idx, &k) in exps.iter().enumerate() {
        if k > 0 {
            p = p
                .mul(&Polynomial::var(vars, &vars.names()[idx]).expect("var").pow(k))
                .expect("vars");
        }
    }
    p
}

fn enumerate_monomials(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, idx: usize, left: u32) {
        if idx == current.len() {
            out.push(current.clone());
            return;
        }
        for k in 0..=left {
            current[idx] = k;
            rec(out, current, idx + 1, left - k);
        }
        current[idx] = 0;
    }
    rec(&mut out, &mut current, 0, max_degree);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;
    use crate::rational::rat;

    fn so3() -> PoissonModel {
        let vars = VariableSet::coords(["x1", "x2", "x3"]);
        let x = |n: &str| Polynomial::var(&vars, n).unwrap();
        PoissonModel::new(
            "so3",
            ["x1", "x2", "x3"],
            Vec::<String>::new(),
            &[(0, 1, x("x3")), (1, 2, x("x1")), (2, 0, x("x2"))],
            None,
        )
        .unwrap()
    }

    fn broken_so3() -> PoissonModel {
        // {x3,x1} = x1 instead of x2
        let vars = VariableSet::coords(["x1", "x2", "x3"]);
        let x = |n: &str| Polynomial::var(&vars, n).unwrap();
        PoissonModel::new(
            "broken",
            ["x1", "x2", "x3"],
            Vec::<String>::new(),
            &[(0, 1, x("x3")), (1, 2, x("x1")), (2, 0, x("x1"))],
            None,
        )
        .unwrap()
    }

    #[test]
    fn function_bracket_vanishes() {
        let m = so3();
        let f = m.lift(&parse_expression("x1*x2 + x3", m.vars()).unwrap()).unwrap();
        let g = m.lift(&parse_expression("x3^2", m.vars()).unwrap()).unwrap();
        assert!(m.schouten_bracket(&f, &g).unwrap().is_zero());
    }

    #[test]
    fn so3_self_bracket_vanishes() {
        let m = so3();
        let w = m.bivector_element(Bivector::Varpi);
        assert!(m.schouten_bracket(&w, &w).unwrap().is_zero());
    }

    #[test]
    fn bracket_with_coordinate() {
        // [w_so3, x3] = -x2 y1 + x1 y2
        let m = so3();
        let w = m.bivector_element(Bivector::Varpi);
        let x3 = m.lift(&Polynomial::var(m.vars(), "x3").unwrap()).unwrap();
        let br = m.schouten_bracket(&w, &x3).unwrap();
        assert_eq!(
            m.component(&br, &[0]).unwrap(),
            parse_expression("-x2", m.vars()).unwrap()
        );
        assert_eq!(
            m.component(&br, &[1]).unwrap(),
            parse_expression("x1", m.vars()).unwrap()
        );
        assert!(m.component(&br, &[2]).unwrap().is_zero());
    }

    #[test]
    fn poisson_bracket_examples() {
        let m = so3();
        let x1 = Polynomial::var(m.vars(), "x1").unwrap();
        let x2 = Polynomial::var(m.vars(), "x2").unwrap();
        assert_eq!(
            m.poisson_bracket(&x1, &x2, Bivector::Varpi).unwrap(),
            Polynomial::var(m.vars(), "x3").unwrap()
        );
        let f = parse_expression("x1^2 - x3", m.vars()).unwrap();
        assert!(m.poisson_bracket(&f, &f, Bivector::Varpi).unwrap().is_zero());
    }

    #[test]
    fn poisson_bracket_antisymmetry_and_jacobi() {
        let m = so3();
        let polys = [
            parse_expression("x1*x2", m.vars()).unwrap(),
            parse_expression("x3^2 - x1", m.vars()).unwrap(),
            parse_expression("x2 + 2*x3", m.vars()).unwrap(),
        ];
        for f in &polys {
            for g in &polys {
                let fg = m.poisson_bracket(f, g, Bivector::Varpi).unwrap();
                let gf = m.poisson_bracket(g, f, Bivector::Varpi).unwrap();
                assert!(fg.add(&gf).unwrap().is_zero());
            }
        }
        let [f, g, h] = &polys;
        let j1 = m
            .poisson_bracket(f, &m.poisson_bracket(g, h, Bivector::Varpi).unwrap(), Bivector::Varpi)
            .unwrap();
        let j2 = m
            .poisson_bracket(g, &m.poisson_bracket(h, f, Bivector::Varpi).unwrap(), Bivector::Varpi)
            .unwrap();
        let j3 = m
            .poisson_bracket(h, &m.poisson_bracket(f, g, Bivector::Varpi).unwrap(), Bivector::Varpi)
            .unwrap();
        assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero());
    }

    #[test]
    fn hamilton_field_components() {
        let m = so3();
        let x3 = Polynomial::var(m.vars(), "x3").unwrap();
        let u = m.hamilton_vector_field(&x3, Bivector::Varpi).unwrap();
        assert_eq!(
            m.component(&u, &[0]).unwrap(),
            Polynomial::var(m.vars(), "x2").unwrap()
        );
        assert_eq!(
            m.component(&u, &[1]).unwrap(),
            Polynomial::var(m.vars(), "x1").unwrap().neg()
        );
        assert!(m.component(&u, &[2]).unwrap().is_zero());
        let c = Polynomial::constant(m.vars(), rat(7));
        assert!(m.hamilton_vector_field(&c, Bivector::Varpi).unwrap().is_zero());
    }

    #[test]
    fn hamilton_fields_close_on_brackets() {
        // [u_f, u_g] = u_{f,g}
        let m = so3();
        let f = parse_expression("x1*x2", m.vars()).unwrap();
        let g = parse_expression("x3^2 - x2", m.vars()).unwrap();
        let uf = m.hamilton_vector_field(&f, Bivector::Varpi).unwrap();
        let ug = m.hamilton_vector_field(&g, Bivector::Varpi).unwrap();
        let lhs = m.schouten_bracket(&uf, &ug).unwrap();
        let fg = m.poisson_bracket(&f, &g, Bivector::Varpi).unwrap();
        let rhs = m.hamilton_vector_field(&fg, Bivector::Varpi).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lichnerowicz_examples() {
        let m = so3();
        let one = SuperPolynomial::one(m.table());
        assert!(m.lichnerowicz_differential(&one, Bivector::Varpi).unwrap().is_zero());
        let w = m.bivector_element(Bivector::Varpi);
        assert!(m.lichnerowicz_differential(&w, Bivector::Varpi).unwrap().is_zero());
    }

    #[test]
    fn lichnerowicz_squares_to_zero() {
        let m = so3();
        let elems = [
            m.lift(&parse_expression("x1^2*x3", m.vars()).unwrap()).unwrap(),
            m.hamilton_vector_field(
                &parse_expression("x2*x3", m.vars()).unwrap(),
                Bivector::Varpi,
            )
            .unwrap(),
            m.bivector_element(Bivector::Varpi),
        ];
        for z in &elems {
            let qz = m.lichnerowicz_differential(z, Bivector::Varpi).unwrap();
            let qqz = m.lichnerowicz_differential(&qz, Bivector::Varpi).unwrap();
            assert!(qqz.is_zero());
        }
    }

    #[test]
    fn casimir_verification() {
        let m = so3();
        let f = parse_expression("x1^2 + x2^2 + x3^2", m.vars()).unwrap();
        assert!(m.verify_casimir(&f, Bivector::Varpi).unwrap().passed());
        let one = Polynomial::one(m.vars());
        assert!(m.verify_casimir(&one, Bivector::Varpi).unwrap().passed());
        let x1 = Polynomial::var(m.vars(), "x1").unwrap();
        let rep = m.verify_casimir(&x1, Bivector::Varpi).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn casimir_search_so3() {
        let m = so3();
        let basis = m.casimir_search(Bivector::Varpi, 2).unwrap();
        assert_eq!(basis.len(), 2);
        for f in &basis {
            assert!(m.verify_casimir(f, Bivector::Varpi).unwrap().passed());
        }
        // x1^2+x2^2+x3^2 lies in the span: appending it keeps rank 2
        let target = parse_expression("x1^2 + x2^2 + x3^2", m.vars()).unwrap();
        assert!(in_span(&basis, &target));
    }

    pub(super) fn in_span(basis: &[Polynomial], target: &Polynomial) -> bool {
        use std::collections::BTreeSet;
        let mut monos: BTreeSet<Vec<u32>> = BTreeSet::new();
        for p in basis.iter().chain(std::iter::once(target)) {
            for (e, _) in p.terms() {
                monos.insert(e.clone());
            }
        }
        let monos: Vec<_> = monos.into_iter().collect();
        let to_row = |p: &Polynomial| -> Vec<Rational> {
            monos
                .iter()
                .map(|e| {
                    p.terms()
                        .find(|(pe, _)| *pe == e)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(Rational::zero)
                })
                .collect()
        };
        let mut rows: Vec<Vec<Rational>> = basis.iter().map(to_row).collect();
        let rank_without = linalg::rref(&mut rows.clone()).len();
        rows.push(to_row(target));
        let rank_with = linalg::rref(&mut rows).len();
        rank_with == rank_without
    }

    #[test]
    fn casimir_search_zero_bivector() {
        let vars = VariableSet::coords(["x1", "x2", "x3"]);
        let _ = vars;
        let m = PoissonModel::new(
            "zero",
            ["x1", "x2", "x3"],
            Vec::<String>::new(),
            &[],
            None,
        )
        .unwrap();
        let basis = m.casimir_search(Bivector::Varpi, 1).unwrap();
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn structure_check_pass_and_fail() {
        assert!(so3().model_structure_check().unwrap().passed());
        let rep = broken_so3().model_structure_check().unwrap();
        assert!(!rep.passed());
        let witness = rep.items[0].witness.clone().unwrap();
        assert_eq!(witness, "(1,2,3): -x3");
    }

    #[test]
    fn convention_lock_self_bracket_is_twice_jacobiator() {
        // components of [b,b] equal 2 (b^{im} d_m b^{jk} + cyclic)
        let m = broken_so3();
        let b = m.bivector_element(Bivector::Varpi);
        let br = m.schouten_bracket(&b, &b).unwrap();
        let mat = m.bivector_matrix(Bivector::Varpi);
        let jac = |i: usize, j: usize, k: usize| -> Polynomial {
            let mut acc = Polynomial::zero(m.vars());
            for mm in 0..3 {
                let cyc = [(i, j, k), (j, k, i), (k, i, j)];
                for (a, bb, c) in cyc {
                    acc = acc
                        .add(
                            &mat[a][mm]
                                .mul(&mat[bb][c].partial_derivative(&m.coords()[mm]).unwrap())
                                .unwrap(),
                        )
                        .unwrap();
                }
            }
            acc
        };
        for (i, j, k) in [(0usize, 1usize, 2usize)] {
            let comp = m.component(&br, &[i, j, k]).unwrap();
            assert_eq!(comp, jac(i, j, k).scale(&rat(2)));
        }
    }

    #[test]
    fn convention_lock_vector_field_bracket() {
        // components of [w,u] equal u^k d_k w^{ij} - d_k u^i w^{kj} - d_k u^j w^{ik}
        let m = so3();
        let w = m.bivector_element(Bivector::Varpi);
        // u = x1^2 y2 + x3 y1 (not Poisson; the identity is structural)
        let u = m
            .lift(&parse_expression("x1^2", m.vars()).unwrap())
            .unwrap()
            .mul(&SuperPolynomial::generator(m.table(), "y2").unwrap())
            .unwrap()
            .add(
                &m.lift(&Polynomial::var(m.vars(), "x3").unwrap())
                    .unwrap()
                    .mul(&SuperPolynomial::generator(m.table(), "y1").unwrap())
                    .unwrap(),
            )
            .unwrap();
        let br = m.schouten_bracket(&w, &u).unwrap();
        let mat = m.bivector_matrix(Bivector::Varpi);
        let ucomp = [
            m.component(&u, &[0]).unwrap(),
            m.component(&u, &[1]).unwrap(),
            m.component(&u, &[2]).unwrap(),
        ];
        for i in 0..3 {
            for j in 0..3 {
                let mut expected = Polynomial::zero(m.vars());
                for k in 0..3 {
                    let dk = &m.coords()[k];
                    expected = expected
                        .add(&ucomp[k].mul(&mat[i][j].partial_derivative(dk).unwrap()).unwrap())
                        .unwrap()
                        .sub(&ucomp[i].partial_derivative(dk).unwrap().mul(&mat[k][j]).unwrap())
                        .unwrap()
                        .sub(&ucomp[j].partial_derivative(dk).unwrap().mul(&mat[i][k]).unwrap())
                        .unwrap();
                }
                if i < j {
                    assert_eq!(m.component(&br, &[i, j]).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn poisson_vector_field_lie_derivative_vanishes() {
        // for a Hamilton field u, [u, w] = 0 and [u,[w,z]] = [w,[u,z]]
        let m = so3();
        let f = parse_expression("x1*x3", m.vars()).unwrap();
        let u = m.hamilton_vector_field(&f, Bivector::Varpi).unwrap();
        let w = m.bivector_element(Bivector::Varpi);
        assert!(m.schouten_bracket(&u, &w).unwrap().is_zero());
        assert!(m.poisson_vector_field_check(&u).unwrap().passed());
        let z = m
            .hamilton_vector_field(&parse_expression("x2^2", m.vars()).unwrap(), Bivector::Varpi)
            .unwrap();
        let lhs = m.schouten_bracket(&u, &m.schouten_bracket(&w, &z).unwrap()).unwrap();
        let rhs = m.schouten_bracket(&w, &m.schouten_bracket(&u, &z).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
