//! De Rham superfields on a 2-dimensional chart, singular superchains
//! over rational affine simplices, exact integration and the pairing
//! of target algebra elements with concrete field configurations.
//!
//! A superfield of intrinsic degree p is the triplet (psi0, psi1_a,
//! psi2) of its 0-, 1- and 2-form components; the stored psi2 is the
//! single independent component psi2_{12}. Products follow the pinned
//! component ledger: with e = (-1)^p for the left factor,
//!
//! ```text
//! (AB)0   = a0 b0
//! (AB)1_a = e a0 b1_a + a1_a b0
//! (AB)2   = a0 b2 + a2 b0 - e (a1_1 b1_2 - a1_2 b1_1)
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cartan::OperationContext;
use crate::error::{Error, Result};
use crate::polynomial::{Polynomial, VariableSet};
use crate::rational::Rational;
use crate::report::{CheckItem, CheckReport};
use crate::super_poly::SuperPolynomial;

/// The chart variables z1, z2 shared by all worldsheet objects.
pub fn worldsheet_vars() -> Arc<VariableSet> {
    VariableSet::coords(["z1", "z2"])
}

pub type Vertex = [Rational; 2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeRhamSuperfield {
    vars: Arc<VariableSet>,
    degree: i64,
    psi0: Polynomial,
    psi1: [Polynomial; 2],
    psi2: Polynomial,
}

impl DeRhamSuperfield {
    pub fn zero(vars: &Arc<VariableSet>, degree: i64) -> Self {
        DeRhamSuperfield {
            vars: Arc::clone(vars),
            degree,
            psi0: Polynomial::zero(vars),
            psi1: [Polynomial::zero(vars), Polynomial::zero(vars)],
            psi2: Polynomial::zero(vars),
        }
    }

    pub fn constant(vars: &Arc<VariableSet>, c: Rational) -> Self {
        let mut out = Self::zero(vars, 0);
        out.psi0 = Polynomial::constant(vars, c);
        out
    }

    pub fn from_components(
        degree: i64,
        psi0: Polynomial,
        psi1: [Polynomial; 2],
        psi2: Polynomial,
    ) -> Self {
        let vars = Arc::clone(psi0.vars());
        DeRhamSuperfield {
            vars,
            degree,
            psi0,
            psi1,
            psi2,
        }
    }

    pub fn vars(&self) -> &Arc<VariableSet> {
        &self.vars
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn psi0(&self) -> &Polynomial {
        &self.psi0
    }

    pub fn psi1(&self) -> &[Polynomial; 2] {
        &self.psi1
    }

    pub fn psi2(&self) -> &Polynomial {
        &self.psi2
    }

    pub fn is_zero(&self) -> bool {
        self.psi0.is_zero()
            && self.psi1[0].is_zero()
            && self.psi1[1].is_zero()
            && self.psi2.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        // Zero acts as neutral in any degree.
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        // Only the parity of the degree feeds the product signs, so
        // sums may mix degrees of equal parity.
        if self.degree.rem_euclid(2) != other.degree.rem_euclid(2) {
            return Err(Error::ConfigurationDegree {
                name: "superfield sum".into(),
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(DeRhamSuperfield {
            vars: Arc::clone(&self.vars),
            degree: self.degree.max(other.degree),
            psi0: self.psi0.add(&other.psi0)?,
            psi1: [
                self.psi1[0].add(&other.psi1[0])?,
                self.psi1[1].add(&other.psi1[1])?,
            ],
            psi2: self.psi2.add(&other.psi2)?,
        })
    }

    pub fn neg(&self) -> Self {
        DeRhamSuperfield {
            vars: Arc::clone(&self.vars),
            degree: self.degree,
            psi0: self.psi0.neg(),
            psi1: [self.psi1[0].neg(), self.psi1[1].neg()],
            psi2: self.psi2.neg(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        DeRhamSuperfield {
            vars: Arc::clone(&self.vars),
            degree: self.degree,
            psi0: self.psi0.scale(k),
            psi1: [self.psi1[0].scale(k), self.psi1[1].scale(k)],
            psi2: self.psi2.scale(k),
        }
    }

    /// Componentwise graded product per the ledger in the module docs.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let e_negative = self.degree.rem_euclid(2) == 1;
        let signed = |p: Polynomial| if e_negative { p.neg() } else { p };
        let psi0 = self.psi0.mul(&other.psi0)?;
        let psi1 = [
            signed(self.psi0.mul(&other.psi1[0])?).add(&self.psi1[0].mul(&other.psi0)?)?,
            signed(self.psi0.mul(&other.psi1[1])?).add(&self.psi1[1].mul(&other.psi0)?)?,
        ];
        let cross = self.psi1[0]
            .mul(&other.psi1[1])?
            .sub(&self.psi1[1].mul(&other.psi1[0])?)?;
        let psi2 = self
            .psi0
            .mul(&other.psi2)?
            .add(&self.psi2.mul(&other.psi0)?)?
            .sub(&signed(cross))?;
        Ok(DeRhamSuperfield {
            vars: Arc::clone(&self.vars),
            degree: self.degree + other.degree,
            psi0,
            psi1,
            psi2,
        })
    }

    /// The worldsheet differential acting componentwise.
    pub fn d(&self) -> Self {
        let d1 = self.psi0.partial_derivative("z1").expect("z1");
        let d2 = self.psi0.partial_derivative("z2").expect("z2");
        let curl = self.psi1[1]
            .partial_derivative("z1")
            .expect("z1")
            .sub(&self.psi1[0].partial_derivative("z2").expect("z2"))
            .expect("vars");
        DeRhamSuperfield {
            vars: Arc::clone(&self.vars),
            degree: self.degree + 1,
            psi0: Polynomial::zero(&self.vars),
            psi1: [d1, d2],
            psi2: curl,
        }
    }
}

pub fn superfield_d(psi: &DeRhamSuperfield) -> DeRhamSuperfield {
    psi.d()
}

/// Integer-weighted formal sums of rational points, oriented segments
/// and oriented triangles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Superchain {
    pub points: Vec<(i64, Vertex)>,
    pub segments: Vec<(i64, [Vertex; 2])>,
    pub triangles: Vec<(i64, [Vertex; 3])>,
}

impl Superchain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(mut self, weight: i64, p: Vertex) -> Self {
        self.points.push((weight, p));
        self
    }

    pub fn segment(mut self, weight: i64, a: Vertex, b: Vertex) -> Self {
        self.segments.push((weight, [a, b]));
        self
    }

    pub fn triangle(mut self, weight: i64, v0: Vertex, v1: Vertex, v2: Vertex) -> Self {
        self.triangles.push((weight, [v0, v1, v2]));
        self
    }

    /// The positively oriented unit square split along a diagonal.
    pub fn unit_square() -> Self {
        let z = || Rational::zero();
        let o = || Rational::one();
        Self::new()
            .triangle(1, [z(), z()], [o(), z()], [o(), o()])
            .triangle(1, [z(), z()], [o(), o()], [z(), o()])
    }

    /// Boundary per dimension: points from segments, segments from
    /// triangles, nothing in dimension 2.
    pub fn boundary(&self) -> Superchain {
        let mut out = Superchain::new();
        for (w, [a, b]) in &self.segments {
            out.points.push((-*w, a.clone()));
            out.points.push((*w, b.clone()));
        }
        for (w, [v0, v1, v2]) in &self.triangles {
            out.segments.push((*w, [v1.clone(), v2.clone()]));
            out.segments.push((-*w, [v0.clone(), v2.clone()]));
            out.segments.push((*w, [v0.clone(), v1.clone()]));
        }
        out
    }

    fn points_cancel(points: &[(i64, Vertex)]) -> bool {
        let mut acc: BTreeMap<Vertex, i64> = BTreeMap::new();
        for (w, p) in points {
            *acc.entry(p.clone()).or_insert(0) += w;
        }
        acc.values().all(|w| *w == 0)
    }

    fn segments_cancel(segments: &[(i64, [Vertex; 2])]) -> bool {
        let mut acc: BTreeMap<[Vertex; 2], i64> = BTreeMap::new();
        for (w, [a, b]) in segments {
            if a == b {
                continue;
            }
            // Canonical orientation: ascending endpoints, signed weight.
            if a < b {
                *acc.entry([a.clone(), b.clone()]).or_insert(0) += w;
            } else {
                *acc.entry([b.clone(), a.clone()]).or_insert(0) -= w;
            }
        }
        acc.values().all(|w| *w == 0)
    }

    /// A supercycle has cancelling boundary in every dimension.
    pub fn is_cycle(&self) -> bool {
        self.cycle_defect().is_none()
    }

    /// Lowest dimension in which the boundary fails to cancel.
    pub fn cycle_defect(&self) -> Option<usize> {
        let b = self.boundary();
        if !Self::points_cancel(&b.points) {
            return Some(0);
        }
        if !Self::segments_cancel(&b.segments) {
            return Some(1);
        }
        None
    }

    pub fn is_pure_surface(&self) -> bool {
        self.points.is_empty() && self.segments.is_empty()
    }
}

fn factorial(n: u32) -> Rational {
    let mut out = Rational::one();
    for k in 2..=n {
        out *= Rational::from_integer(k.into());
    }
    out
}

fn point_value(p: &Polynomial, v: &Vertex) -> Result<Rational> {
    let mut point = BTreeMap::new();
    point.insert("z1".to_string(), v[0].clone());
    point.insert("z2".to_string(), v[1].clone());
    p.evaluate_at(&point)
}

/// Exact line integral of psi1 over the affine segment a -> b.
fn segment_integral(psi1: &[Polynomial; 2], a: &Vertex, b: &Vertex) -> Result<Rational> {
    let tvars = VariableSet::coords(["t"]);
    let t = Polynomial::var(&tvars, "t")?;
    let images: Vec<Polynomial> = (0..2)
        .map(|k| {
            Polynomial::constant(&tvars, a[k].clone())
                .add(&t.scale(&(b[k].clone() - a[k].clone())))
                .expect("vars")
        })
        .collect();
    let mut integrand = Polynomial::zero(&tvars);
    for alpha in 0..2 {
        let tangent = b[alpha].clone() - a[alpha].clone();
        if tangent.is_zero() {
            continue;
        }
        integrand = integrand.add(&psi1[alpha].compose(&images)?.scale(&tangent))?;
    }
    let mut out = Rational::zero();
    for (exps, coeff) in integrand.terms() {
        out += coeff.clone() / Rational::from_integer((exps[0] + 1).into());
    }
    Ok(out)
}

/// Exact surface integral of psi2 dz1 dz2 over the oriented triangle.
fn triangle_integral(psi2: &Polynomial, v: &[Vertex; 3]) -> Result<Rational> {
    let e1 = [v[1][0].clone() - v[0][0].clone(), v[1][1].clone() - v[0][1].clone()];
    let e2 = [v[2][0].clone() - v[0][0].clone(), v[2][1].clone() - v[0][1].clone()];
    let jac = e1[0].clone() * e2[1].clone() - e1[1].clone() * e2[0].clone();
    if jac.is_zero() {
        return Ok(Rational::zero());
    }
    let stvars = VariableSet::coords(["s", "t"]);
    let s = Polynomial::var(&stvars, "s")?;
    let t = Polynomial::var(&stvars, "t")?;
    let images: Vec<Polynomial> = (0..2)
        .map(|k| {
            Polynomial::constant(&stvars, v[0][k].clone())
                .add(&s.scale(&e1[k]))
                .expect("vars")
                .add(&t.scale(&e2[k]))
                .expect("vars")
        })
        .collect();
    let g = psi2.compose(&images)?;
    // Monomial integral over the standard simplex:
    // int s^a t^b ds dt = a! b! / (a+b+2)!.
    let mut out = Rational::zero();
    for (exps, coeff) in g.terms() {
        let (a, b) = (exps[0], exps[1]);
        out += coeff.clone() * factorial(a) * factorial(b) / factorial(a + b + 2);
    }
    Ok(out * jac)
}

/// Exact pairing of a superfield with a superchain, dimension by
/// dimension.
pub fn integrate(psi: &DeRhamSuperfield, chain: &Superchain) -> Result<Rational> {
    let mut out = Rational::zero();
    for (w, p) in &chain.points {
        out += point_value(&psi.psi0, p)? * Rational::from_integer((*w).into());
    }
    for (w, [a, b]) in &chain.segments {
        out += segment_integral(&psi.psi1, a, b)? * Rational::from_integer((*w).into());
    }
    for (w, v) in &chain.triangles {
        out += triangle_integral(&psi.psi2, v)? * Rational::from_integer((*w).into());
    }
    Ok(out)
}

/// The two integration paths of the boundary formula agree exactly;
/// on a cycle the differential integrates to zero.
pub fn stokes_check(psi: &DeRhamSuperfield, chain: &Superchain) -> Result<CheckReport> {
    let mut report = CheckReport::new("stokes pairing");
    let lhs = integrate(&psi.d(), chain)?;
    let rhs = integrate(psi, &chain.boundary())?;
    if lhs == rhs {
        report.push(CheckItem::pass("chain integral of d equals boundary integral"));
    } else {
        report.push(CheckItem::fail(
            "chain integral of d equals boundary integral",
            format!("{lhs} != {rhs}"),
        ));
    }
    if chain.is_cycle() {
        if lhs.is_zero() {
            report.push(CheckItem::pass("integral of d vanishes on the cycle"));
        } else {
            report.push(CheckItem::fail(
                "integral of d vanishes on the cycle",
                lhs.to_string(),
            ));
        }
    }
    Ok(report)
}

/// Superfields for the base generators x^i, y_i, gamma^a and the
/// parameters; the derived generators Xt^i, Yt_i, Gamma^a are always
/// the d-images of their partners, so the realization intertwines the
/// two differentials by construction.
#[derive(Debug, Clone, Default)]
pub struct FieldConfiguration {
    assignments: BTreeMap<String, DeRhamSuperfield>,
}

impl FieldConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(&mut self, name: impl Into<String>, psi: DeRhamSuperfield) {
        self.assignments.insert(name.into(), psi);
    }

    /// Everything zero; a valid configuration for any context.
    pub fn zeros(ctx: &OperationContext, vars: &Arc<VariableSet>) -> Self {
        let mut cfg = Self::new();
        for c in ctx.model().coords() {
            cfg.assign(c.clone(), DeRhamSuperfield::zero(vars, 0));
        }
        for p in ctx.model().params() {
            cfg.assign(p.clone(), DeRhamSuperfield::zero(vars, 0));
        }
        for y in ctx.y_names() {
            cfg.assign(y.clone(), DeRhamSuperfield::zero(vars, 1));
        }
        for g in ctx.gamma_names() {
            cfg.assign(g.clone(), DeRhamSuperfield::zero(vars, 1));
        }
        cfg
    }

    fn resolve(
        &self,
        ctx: &OperationContext,
        vars: &Arc<VariableSet>,
        name: &str,
    ) -> Result<DeRhamSuperfield> {
        let base = |base_name: &str| -> Result<DeRhamSuperfield> {
            self.assignments
                .get(base_name)
                .cloned()
                .ok_or_else(|| Error::UnassignedGenerator(base_name.to_string()))
        };
        if let Some(i) = ctx.xt_names().iter().position(|n| n == name) {
            return Ok(base(&ctx.model().coords()[i])?.d());
        }
        if let Some(i) = ctx.yt_names().iter().position(|n| n == name) {
            return Ok(base(&ctx.y_names()[i])?.d());
        }
        if let Some(a) = ctx.big_gamma_names().iter().position(|n| n == name) {
            return Ok(base(&ctx.gamma_names()[a])?.d());
        }
        let psi = base(name)?;
        let idx = ctx
            .table()
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let expected = i64::from(ctx.table().degree_of(idx));
        if !psi.is_zero() && psi.degree() != expected {
            return Err(Error::ConfigurationDegree {
                name: name.to_string(),
                expected,
                got: psi.degree(),
            });
        }
        let _ = vars;
        Ok(psi)
    }
}

/// Realize a target algebra element as a de Rham superfield by
/// substituting the configured superfields for the generators, with
/// products taken in normal-form factor order.
pub fn evaluate_configuration(
    ctx: &OperationContext,
    element: &SuperPolynomial,
    config: &FieldConfiguration,
) -> Result<DeRhamSuperfield> {
    let vars = worldsheet_vars();
    let mut out = DeRhamSuperfield::zero(&vars, 0);
    for (even, odd, coeff) in element.terms_named() {
        let mut acc = DeRhamSuperfield::constant(&vars, coeff);
        for (name, k) in even {
            let psi = config.resolve(ctx, &vars, &name)?;
            for _ in 0..k {
                acc = acc.mul(&psi)?;
            }
        }
        for name in odd {
            let psi = config.resolve(ctx, &vars, &name)?;
            acc = acc.mul(&psi)?;
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

/// Integral of the realized Lagrangian element over a pure surface
/// chain.
pub fn action_value(
    ctx: &OperationContext,
    config: &FieldConfiguration,
    chain: &Superchain,
) -> Result<Rational> {
    if !chain.is_pure_surface() {
        return Err(Error::ActionChain);
    }
    let lag = ctx.lagrangian_element()?;
    let psi = evaluate_configuration(ctx, &lag, config)?;
    integrate(&psi, chain)
}

/// Pairing of an element realization with a supercycle.
pub fn pair_observable(
    ctx: &OperationContext,
    element: &SuperPolynomial,
    config: &FieldConfiguration,
    cycle: &Superchain,
) -> Result<Rational> {
    if let Some(dim) = cycle.cycle_defect() {
        return Err(Error::NotACycle(dim));
    }
    let psi = evaluate_configuration(ctx, element, config)?;
    integrate(&psi, cycle)
}
