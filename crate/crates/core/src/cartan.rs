//! The equivariant operation on the full generator algebra: coordinates
//! x^i, their odd partners y_i, the odd/even doublets Xt^i, Yt_i, and
//! the symmetry doublets gamma^a, Gamma^a, together with the graded
//! derivations s, d, j(t_a), l(t_a), k, k_pi, h and w_pi and the exact
//! identity checks relating them.
//!
//! The symmetry enters only through the composites
//! omega^i = gamma^a v_a^i(x), Omega^i = Gamma^a v_a^i(x) and, for a
//! Hamilton action, phi = gamma^a h_a(x), Phi = Gamma^a h_a(x).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::poisson::{schouten_bracket_in, Bivector, PoissonModel};
use crate::polynomial::Polynomial;
use crate::rational::{ratio, Rational};
use crate::report::{CheckItem, CheckReport};
use crate::super_poly::{GenKind, GeneratorDef, GeneratorTable, SuperPolynomial};
use crate::symmetry::{verify_action, verify_lie_algebra, ActionSpec, LieAlgebra};

/// Whether an element lives in the x,y or the x,Xt subalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Multivector,
    Form,
}

#[derive(Debug, Clone)]
pub struct OperationContext {
    model: PoissonModel,
    liealg: LieAlgebra,
    action: ActionSpec,
    table: Arc<GeneratorTable>,
    ys: Vec<String>,
    xt: Vec<String>,
    yt: Vec<String>,
    gamma: Vec<String>,
    big_gamma: Vec<String>,
    /// v_a^i, the action vector field components.
    v: Vec<Vec<SuperPolynomial>>,
    /// h_a(x), present for a Hamilton action.
    hams: Option<Vec<SuperPolynomial>>,
    varpi: Vec<Vec<SuperPolynomial>>,
    pi: Vec<Vec<SuperPolynomial>>,
    big_phi: Option<SuperPolynomial>,
    s: Derivation,
    d: Derivation,
    j: Vec<Derivation>,
    l: Vec<Derivation>,
    k: Derivation,
    k_pi: Derivation,
    h: Option<Derivation>,
    w_pi: Option<Derivation>,
}

fn indexed(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn gen(table: &Arc<GeneratorTable>, name: &str) -> SuperPolynomial {
    SuperPolynomial::generator(table, name).expect("generator in table")
}

fn lift_matrix(
    table: &Arc<GeneratorTable>,
    m: &[Vec<Polynomial>],
) -> Result<Vec<Vec<SuperPolynomial>>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|p| SuperPolynomial::from_polynomial(table, p))
                .collect()
        })
        .collect()
}

/// s on the doublets x -> Xt + w y, Xt, y -> Yt + .., Yt per the
/// bivector rules alone; the symmetry composites are added separately.
fn bivector_s(
    label: &str,
    table: &Arc<GeneratorTable>,
    coords: &[String],
    ys: &[String],
    xt: &[String],
    yt: &[String],
    w: &[Vec<SuperPolynomial>],
) -> Result<Derivation> {
    let n = coords.len();
    let mut s = Derivation::new(label, 1, table);
    for i in 0..n {
        let mut sx = gen(table, &xt[i]);
        for j in 0..n {
            sx = sx.add(&w[i][j].mul(&gen(table, &ys[j]))?)?;
        }
        s.set_action(&coords[i], sx)?;

        let mut sxt = SuperPolynomial::zero(table);
        for j in 0..n {
            sxt = sxt.sub(&w[i][j].mul(&gen(table, &yt[j]))?)?;
            for kk in 0..n {
                let dw = w[i][kk].partial_even(&coords[j])?;
                sxt = sxt.sub(&dw.mul(&gen(table, &xt[j]))?.mul(&gen(table, &ys[kk]))?)?;
            }
        }
        s.set_action(&xt[i], sxt)?;

        let mut sy = gen(table, &yt[i]);
        for j in 0..n {
            for kk in 0..n {
                let dw = w[j][kk].partial_even(&coords[i])?;
                let term = dw.mul(&gen(table, &ys[j]))?.mul(&gen(table, &ys[kk]))?;
                sy = sy.add(&term.scale(&ratio(1, 2)))?;
            }
        }
        s.set_action(&ys[i], sy)?;

        let mut syt = SuperPolynomial::zero(table);
        for j in 0..n {
            for kk in 0..n {
                for ll in 0..n {
                    let ddw = w[kk][ll]
                        .partial_even(&coords[i])?
                        .partial_even(&coords[j])?;
                    let term = ddw
                        .mul(&gen(table, &xt[j]))?
                        .mul(&gen(table, &ys[kk]))?
                        .mul(&gen(table, &ys[ll]))?;
                    syt = syt.sub(&term.scale(&ratio(1, 2)))?;
                }
                let dw = w[j][kk].partial_even(&coords[i])?;
                syt = syt.add(&dw.mul(&gen(table, &ys[j]))?.mul(&gen(table, &yt[kk]))?)?;
            }
        }
        s.set_action(&yt[i], syt)?;
    }
    Ok(s)
}

/// Contraction with the vector field u on the doublet algebra.
fn vf_contraction(
    label: &str,
    table: &Arc<GeneratorTable>,
    coords: &[String],
    ys: &[String],
    xt: &[String],
    yt: &[String],
    u: &[SuperPolynomial],
) -> Result<Derivation> {
    let n = coords.len();
    let mut j = Derivation::new(label, -1, table);
    for i in 0..n {
        j.set_zero(&coords[i])?;
        j.set_zero(&ys[i])?;
        j.set_action(&xt[i], u[i].clone())?;
        let mut jyt = SuperPolynomial::zero(table);
        for jj in 0..n {
            let du = u[jj].partial_even(&coords[i])?;
            jyt = jyt.sub(&du.mul(&gen(table, &ys[jj]))?)?;
        }
        j.set_action(&yt[i], jyt)?;
    }
    Ok(j)
}

/// Lie derivative along the vector field u on the doublet algebra.
fn vf_lie(
    label: &str,
    table: &Arc<GeneratorTable>,
    coords: &[String],
    ys: &[String],
    xt: &[String],
    yt: &[String],
    u: &[SuperPolynomial],
) -> Result<Derivation> {
    let n = coords.len();
    let mut l = Derivation::new(label, 0, table);
    for i in 0..n {
        l.set_action(&coords[i], u[i].clone())?;
        let mut lxt = SuperPolynomial::zero(table);
        for j in 0..n {
            let du = u[i].partial_even(&coords[j])?;
            lxt = lxt.add(&du.mul(&gen(table, &xt[j]))?)?;
        }
        l.set_action(&xt[i], lxt)?;
        let mut ly = SuperPolynomial::zero(table);
        for j in 0..n {
            let du = u[j].partial_even(&coords[i])?;
            ly = ly.sub(&du.mul(&gen(table, &ys[j]))?)?;
        }
        l.set_action(&ys[i], ly)?;
        let mut lyt = SuperPolynomial::zero(table);
        for j in 0..n {
            let du = u[j].partial_even(&coords[i])?;
            lyt = lyt.sub(&du.mul(&gen(table, &yt[j]))?)?;
            for kk in 0..n {
                let ddu = u[kk].partial_even(&coords[i])?.partial_even(&coords[j])?;
                lyt = lyt.sub(&ddu.mul(&gen(table, &xt[j]))?.mul(&gen(table, &ys[kk]))?)?;
            }
        }
        l.set_action(&yt[i], lyt)?;
    }
    Ok(l)
}

pub fn build_operation_context(
    model: &PoissonModel,
    liealg: &LieAlgebra,
    action: &ActionSpec,
    allow_invalid: bool,
) -> Result<OperationContext> {
    let action_report = verify_action(model, liealg, action)?;
    if !allow_invalid {
        let structure = model.model_structure_check()?;
        if !structure.passed() {
            return Err(Error::InvalidModel("bivector structure".into()));
        }
        let lie = verify_lie_algebra(liealg);
        if !lie.passed() {
            return Err(Error::InvalidModel("lie algebra".into()));
        }
        if !action_report.passed() {
            return Err(Error::InvalidModel("symmetry action".into()));
        }
    }

    let n = model.dimension();
    let m = liealg.dimension();
    let coords: Vec<String> = model.coords().to_vec();
    let ys = indexed("y", n);
    let xt = indexed("Xt", n);
    let yt = indexed("Yt", n);
    let gamma = indexed("gamma", m);
    let big_gamma = indexed("Gamma", m);

    let mut defs: Vec<GeneratorDef> = Vec::new();
    for c in &coords {
        defs.push(GeneratorDef {
            name: c.clone(),
            degree: 0,
            kind: GenKind::Coordinate,
        });
    }
    for p in model.params() {
        defs.push(GeneratorDef {
            name: p.clone(),
            degree: 0,
            kind: GenKind::Parameter,
        });
    }
    for (names, degree) in [(&ys, 1u32), (&xt, 1), (&yt, 2), (&gamma, 1), (&big_gamma, 2)] {
        for name in names.iter() {
            defs.push(GeneratorDef {
                name: name.clone(),
                degree,
                kind: GenKind::Field,
            });
        }
    }
    let mut seen = BTreeSet::new();
    for d in &defs {
        if !seen.insert(d.name.clone()) {
            return Err(Error::InvalidModel(format!(
                "generator name collision at `{}`",
                d.name
            )));
        }
    }
    let table = GeneratorTable::new(defs);

    let varpi = lift_matrix(&table, &model.bivector_matrix(Bivector::Varpi))?;
    let pi = lift_matrix(&table, &model.bivector_matrix(Bivector::Pi))?;

    // v_a^i and, when Hamilton, the lifted h_a.
    let mut v: Vec<Vec<SuperPolynomial>> = Vec::with_capacity(m);
    let mut hams: Option<Vec<SuperPolynomial>> = None;
    match action {
        ActionSpec::Hamilton(hs) => {
            let mut lifted = Vec::with_capacity(m);
            for h in hs {
                let u = model.hamilton_vector_field(h, Bivector::Varpi)?;
                let mut comps = Vec::with_capacity(n);
                for i in 0..n {
                    let c = model.component(&u, &[i])?;
                    comps.push(SuperPolynomial::from_polynomial(&table, &c)?);
                }
                v.push(comps);
                lifted.push(SuperPolynomial::from_polynomial(&table, h)?);
            }
            hams = Some(lifted);
        }
        ActionSpec::PoissonVF(us) => {
            for u in us {
                let mut comps = Vec::with_capacity(n);
                for i in 0..n {
                    let c = model.component(u, &[i])?;
                    comps.push(SuperPolynomial::from_polynomial(&table, &c)?);
                }
                v.push(comps);
            }
        }
    }

    // Symmetry composites.
    let mut omega: Vec<SuperPolynomial> = Vec::with_capacity(n);
    let mut big_omega: Vec<SuperPolynomial> = Vec::with_capacity(n);
    for i in 0..n {
        let mut o = SuperPolynomial::zero(&table);
        let mut bo = SuperPolynomial::zero(&table);
        for a in 0..m {
            o = o.add(&gen(&table, &gamma[a]).mul(&v[a][i])?)?;
            bo = bo.add(&gen(&table, &big_gamma[a]).mul(&v[a][i])?)?;
        }
        omega.push(o);
        big_omega.push(bo);
    }
    let big_phi = hams.as_ref().map(|hs| {
        let mut p = SuperPolynomial::zero(&table);
        for (a, h) in hs.iter().enumerate() {
            p = p
                .add(&gen(&table, &big_gamma[a]).mul(h).expect("table"))
                .expect("table");
        }
        p
    });
    let phi = hams.as_ref().map(|hs| {
        let mut p = SuperPolynomial::zero(&table);
        for (a, h) in hs.iter().enumerate() {
            p = p
                .add(&gen(&table, &gamma[a]).mul(h).expect("table"))
                .expect("table");
        }
        p
    });

    // c^a_{bc} in the layout of LieAlgebra::structure_constant(b,c,a).
    let sc = |b: usize, c: usize, a: usize| liealg.structure_constant(b, c, a).clone();

    // s: the bivector rules plus the symmetry composite terms plus the
    // Weil differential on gamma, Gamma.
    let mut s = bivector_s("s", &table, &coords, &ys, &xt, &yt, &varpi)?;
    for i in 0..n {
        let sx = s.action_on(&coords[i])?.add(&omega[i])?;
        s.set_action(&coords[i], sx)?;

        let mut sxt = s.action_on(&xt[i])?.sub(&big_omega[i])?;
        for j in 0..n {
            let dom = omega[i].partial_even(&coords[j])?;
            sxt = sxt.add(&dom.mul(&gen(&table, &xt[j]))?)?;
        }
        s.set_action(&xt[i], sxt)?;

        let mut sy = s.action_on(&ys[i])?.clone();
        for j in 0..n {
            let dom = omega[j].partial_even(&coords[i])?;
            sy = sy.sub(&dom.mul(&gen(&table, &ys[j]))?)?;
        }
        s.set_action(&ys[i], sy)?;

        let mut syt = s.action_on(&yt[i])?.clone();
        for j in 0..n {
            let dbo = big_omega[j].partial_even(&coords[i])?;
            syt = syt.add(&dbo.mul(&gen(&table, &ys[j]))?)?;
            let dom = omega[j].partial_even(&coords[i])?;
            syt = syt.sub(&dom.mul(&gen(&table, &yt[j]))?)?;
            for kk in 0..n {
                let ddom = omega[kk].partial_even(&coords[i])?.partial_even(&coords[j])?;
                syt = syt.sub(&ddom.mul(&gen(&table, &xt[j]))?.mul(&gen(&table, &ys[kk]))?)?;
            }
        }
        s.set_action(&yt[i], syt)?;
    }
    for a in 0..m {
        let mut sg = gen(&table, &big_gamma[a]);
        let mut sbg = SuperPolynomial::zero(&table);
        for b in 0..m {
            for c in 0..m {
                let coeff = sc(b, c, a);
                if coeff.is_zero() {
                    continue;
                }
                let gg = gen(&table, &gamma[b]).mul(&gen(&table, &gamma[c]))?;
                sg = sg.sub(&gg.scale(&(coeff.clone() * ratio(1, 2))))?;
                let gbg = gen(&table, &gamma[b]).mul(&gen(&table, &big_gamma[c]))?;
                sbg = sbg.sub(&gbg.scale(&coeff))?;
            }
        }
        s.set_action(&gamma[a], sg)?;
        s.set_action(&big_gamma[a], sbg)?;
    }

    // d: the shift differential on every doublet.
    let mut d = Derivation::new("d", 1, &table);
    for i in 0..n {
        d.set_action(&coords[i], gen(&table, &xt[i]))?;
        d.set_zero(&xt[i])?;
        d.set_action(&ys[i], gen(&table, &yt[i]))?;
        d.set_zero(&yt[i])?;
    }
    for a in 0..m {
        d.set_action(&gamma[a], gen(&table, &big_gamma[a]))?;
        d.set_zero(&big_gamma[a])?;
    }

    // j(t_a): horizontal on everything except gamma.
    let mut j: Vec<Derivation> = Vec::with_capacity(m);
    for a in 0..m {
        let mut ja = Derivation::new(format!("j({})", liealg.names()[a]), -1, &table);
        ja.fill_zero();
        ja.set_action(&gamma[a], SuperPolynomial::one(&table))?;
        j.push(ja);
    }

    // l(t_a): Lie derivative along v_a plus the coadjoint Weil action.
    let mut l: Vec<Derivation> = Vec::with_capacity(m);
    for a in 0..m {
        let mut la = vf_lie(
            &format!("l({})", liealg.names()[a]),
            &table,
            &coords,
            &ys,
            &xt,
            &yt,
            &v[a],
        )?;
        for b in 0..m {
            let mut lg = SuperPolynomial::zero(&table);
            let mut lbg = SuperPolynomial::zero(&table);
            for c in 0..m {
                let coeff = sc(a, c, b);
                if coeff.is_zero() {
                    continue;
                }
                lg = lg.sub(&gen(&table, &gamma[c]).scale(&coeff))?;
                lbg = lbg.sub(&gen(&table, &big_gamma[c]).scale(&coeff))?;
            }
            la.set_action(&gamma[b], lg)?;
            la.set_action(&big_gamma[b], lbg)?;
        }
        l.push(la);
    }

    // k and k_pi: contraction-homotopy derivations on Xt alone.
    let make_k = |label: &str, w: &[Vec<SuperPolynomial>]| -> Result<Derivation> {
        let mut k = Derivation::new(label, 0, &table);
        k.fill_zero();
        for i in 0..n {
            let mut kx = SuperPolynomial::zero(&table);
            for jj in 0..n {
                kx = kx.add(&w[i][jj].mul(&gen(&table, &ys[jj]))?)?;
            }
            k.set_action(&xt[i], kx)?;
        }
        Ok(k)
    };
    let k = make_k("k", &varpi)?;
    let k_pi = make_k("k_pi", &pi)?;

    // h: like k but contracting with y - d(phi).
    let h = match &phi {
        Some(phi) => {
            let mut hd = Derivation::new("h", 0, &table);
            hd.fill_zero();
            for i in 0..n {
                let mut hx = SuperPolynomial::zero(&table);
                for jj in 0..n {
                    let arg = gen(&table, &ys[jj]).sub(&phi.partial_even(&coords[jj])?)?;
                    hx = hx.add(&varpi[i][jj].mul(&arg)?)?;
                }
                hd.set_action(&xt[i], hx)?;
            }
            Some(hd)
        }
        None => None,
    };

    // w_pi: the bivector rules for pi plus the Phi terms; annihilates
    // the Weil doublet.
    let w_pi = match &big_phi {
        Some(big_phi) => {
            let mut w = bivector_s("w_pi", &table, &coords, &ys, &xt, &yt, &pi)?;
            for i in 0..n {
                let wy = w.action_on(&ys[i])?.sub(&big_phi.partial_even(&coords[i])?)?;
                w.set_action(&ys[i], wy)?;
                let mut wyt = w.action_on(&yt[i])?.clone();
                for jj in 0..n {
                    let ddp = big_phi
                        .partial_even(&coords[i])?
                        .partial_even(&coords[jj])?;
                    wyt = wyt.add(&ddp.mul(&gen(&table, &xt[jj]))?)?;
                }
                w.set_action(&yt[i], wyt)?;
            }
            for a in 0..m {
                w.set_zero(&gamma[a])?;
                w.set_zero(&big_gamma[a])?;
            }
            Some(w)
        }
        None => None,
    };

    Ok(OperationContext {
        model: model.clone(),
        liealg: liealg.clone(),
        action: action.clone(),
        table,
        ys,
        xt,
        yt,
        gamma,
        big_gamma,
        v,
        hams,
        varpi,
        pi,
        big_phi,
        s,
        d,
        j,
        l,
        k,
        k_pi,
        h,
        w_pi,
    })
}

impl OperationContext {
    pub fn model(&self) -> &PoissonModel {
        &self.model
    }

    pub fn liealg(&self) -> &LieAlgebra {
        &self.liealg
    }

    pub fn action(&self) -> &ActionSpec {
        &self.action
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn s_derivation(&self) -> &Derivation {
        &self.s
    }

    pub fn d_derivation(&self) -> &Derivation {
        &self.d
    }

    pub fn j_derivation(&self, a: usize) -> &Derivation {
        &self.j[a]
    }

    pub fn l_derivation(&self, a: usize) -> &Derivation {
        &self.l[a]
    }

    pub fn k_derivation(&self) -> &Derivation {
        &self.k
    }

    pub fn k_pi_derivation(&self) -> &Derivation {
        &self.k_pi
    }

    pub fn h_derivation(&self) -> Result<&Derivation> {
        self.h.as_ref().ok_or(Error::HamiltonActionRequired)
    }

    pub fn w_pi_derivation(&self) -> Result<&Derivation> {
        self.w_pi.as_ref().ok_or(Error::HamiltonActionRequired)
    }

    pub fn y_names(&self) -> &[String] {
        &self.ys
    }

    pub fn xt_names(&self) -> &[String] {
        &self.xt
    }

    pub fn yt_names(&self) -> &[String] {
        &self.yt
    }

    pub fn gamma_names(&self) -> &[String] {
        &self.gamma
    }

    pub fn big_gamma_names(&self) -> &[String] {
        &self.big_gamma
    }

    /// The generators x, Xt, y, Yt, on which a trivialized symmetry
    /// acts as zero.
    pub fn manifold_generators(&self) -> Vec<String> {
        let mut out = self.model.coords().to_vec();
        out.extend(self.xt.iter().cloned());
        out.extend(self.ys.iter().cloned());
        out.extend(self.yt.iter().cloned());
        out
    }

    fn bivector_element(&self, w: &[Vec<SuperPolynomial>]) -> SuperPolynomial {
        let n = self.model.dimension();
        let mut out = SuperPolynomial::zero(&self.table);
        for i in 0..n {
            for jj in (i + 1)..n {
                let term = w[i][jj]
                    .mul(&gen(&self.table, &self.ys[i]))
                    .expect("table")
                    .mul(&gen(&self.table, &self.ys[jj]))
                    .expect("table");
                out = out.add(&term).expect("table");
            }
        }
        out
    }

    pub fn schouten(&self, a: &SuperPolynomial, b: &SuperPolynomial) -> Result<SuperPolynomial> {
        schouten_bracket_in(a, b, self.model.coords(), &self.ys)
    }

    /// q z = [varpi, z] in the context algebra.
    pub fn q(&self, z: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.schouten(&self.bivector_element(&self.varpi), z)
    }

    /// q_pi z = [pi, z] in the context algebra.
    pub fn q_pi(&self, z: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.schouten(&self.bivector_element(&self.pi), z)
    }

    /// Lift a commutative polynomial in the model chart.
    pub fn lift(&self, f: &Polynomial) -> Result<SuperPolynomial> {
        SuperPolynomial::from_polynomial(&self.table, f)
    }

    fn push_zero_derivation(report: &mut CheckReport, label: String, der: &Derivation) {
        match der.nonzero_witness() {
            Ok(None) => report.push(CheckItem::pass(label)),
            Ok(Some((g, res))) => report.push(CheckItem::fail(label, format!("{g}: {res}"))),
            Err(e) => report.push(CheckItem::fail(label, e.to_string())),
        }
    }

    fn push_equal_derivations(
        report: &mut CheckReport,
        label: String,
        lhs: &Derivation,
        rhs: &Derivation,
    ) {
        match lhs.difference_witness(rhs) {
            Ok(None) => report.push(CheckItem::pass(label)),
            Ok(Some((g, res))) => report.push(CheckItem::fail(label, format!("{g}: {res}"))),
            Err(e) => report.push(CheckItem::fail(label, e.to_string())),
        }
    }

    fn push_zero_element(report: &mut CheckReport, label: String, z: &SuperPolynomial) {
        if z.is_zero() {
            report.push(CheckItem::pass(label));
        } else {
            report.push(CheckItem::fail(label, z.to_string()));
        }
    }

    fn structure_combination(&self, label: String, of: &[Derivation], a: usize, b: usize) -> Result<Derivation> {
        let terms: Vec<(Rational, &Derivation)> = (0..self.liealg.dimension())
            .map(|c| (self.liealg.structure_constant(a, b, c).clone(), &of[c]))
            .collect();
        Derivation::linear_combination(label, &terms)
    }

    /// The six defining relations of the operation, instantiated on
    /// every basis pair and decided generator by generator.
    pub fn cartan_check(&self) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!("operation relations: {}", self.model.name()));
        let names = self.liealg.names();
        let m = self.liealg.dimension();
        for a in 0..m {
            for b in 0..m {
                let c = Derivation::commutator(&self.j[a], &self.j[b])?;
                Self::push_zero_derivation(
                    &mut report,
                    format!("[j({}),j({})] = 0", names[a], names[b]),
                    &c,
                );
                let c = Derivation::commutator(&self.l[a], &self.j[b])?;
                let expect = self.structure_combination("expected".into(), &self.j, a, b)?;
                Self::push_equal_derivations(
                    &mut report,
                    format!("[l({}),j({})] = j([{},{}])", names[a], names[b], names[a], names[b]),
                    &c,
                    &expect,
                );
                let c = Derivation::commutator(&self.l[a], &self.l[b])?;
                let expect = self.structure_combination("expected".into(), &self.l, a, b)?;
                Self::push_equal_derivations(
                    &mut report,
                    format!("[l({}),l({})] = l([{},{}])", names[a], names[b], names[a], names[b]),
                    &c,
                    &expect,
                );
            }
        }
        for b in 0..m {
            let c = Derivation::commutator(&self.s, &self.j[b])?;
            Self::push_equal_derivations(
                &mut report,
                format!("[s,j({})] = l({})", names[b], names[b]),
                &c,
                &self.l[b],
            );
            let c = Derivation::commutator(&self.s, &self.l[b])?;
            Self::push_zero_derivation(&mut report, format!("[s,l({})] = 0", names[b]), &c);
        }
        let c = Derivation::commutator(&self.s, &self.s)?;
        Self::push_zero_derivation(&mut report, "[s,s] = 0".into(), &c);
        Ok(report)
    }

    /// Compatibility of d, and of w_pi when present, with the whole
    /// operation.
    pub fn auxiliary_relations_check(&self) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!("auxiliary relations: {}", self.model.name()));
        let names = self.liealg.names();
        let m = self.liealg.dimension();
        let c = Derivation::commutator(&self.d, &self.d)?;
        Self::push_zero_derivation(&mut report, "[d,d] = 0".into(), &c);
        for a in 0..m {
            let c = Derivation::commutator(&self.d, &self.j[a])?;
            Self::push_zero_derivation(&mut report, format!("[d,j({})] = 0", names[a]), &c);
            let c = Derivation::commutator(&self.d, &self.l[a])?;
            Self::push_zero_derivation(&mut report, format!("[d,l({})] = 0", names[a]), &c);
        }
        let c = Derivation::commutator(&self.d, &self.s)?;
        Self::push_zero_derivation(&mut report, "[d,s] = 0".into(), &c);
        if let Some(w) = &self.w_pi {
            let c = Derivation::commutator(w, w)?;
            Self::push_zero_derivation(&mut report, "[w_pi,w_pi] = 0".into(), &c);
            for a in 0..m {
                let c = Derivation::commutator(w, &self.j[a])?;
                Self::push_zero_derivation(&mut report, format!("[w_pi,j({})] = 0", names[a]), &c);
                let c = Derivation::commutator(w, &self.l[a])?;
                Self::push_zero_derivation(&mut report, format!("[w_pi,l({})] = 0", names[a]), &c);
            }
            let c = Derivation::commutator(w, &self.s)?;
            Self::push_zero_derivation(&mut report, "[w_pi,s] = 0".into(), &c);
            let c = Derivation::commutator(w, &self.d)?;
            Self::push_zero_derivation(&mut report, "[w_pi,d] = 0".into(), &c);
        }
        Ok(report)
    }

    /// The degree 2 element y_i Xt^i + 1/2 pi^{ij} y_i y_j - Phi.
    pub fn lagrangian_element(&self) -> Result<SuperPolynomial> {
        let big_phi = self.big_phi.as_ref().ok_or(Error::HamiltonActionRequired)?;
        let n = self.model.dimension();
        let mut out = SuperPolynomial::zero(&self.table);
        for i in 0..n {
            out = out.add(
                &gen(&self.table, &self.ys[i]).mul(&gen(&self.table, &self.xt[i]))?,
            )?;
        }
        out = out.add(&self.bivector_element(&self.pi))?;
        out.sub(big_phi)
    }

    /// j, l annihilate the Lagrangian element and s moves it by an
    /// exact shift.
    pub fn lagrangian_class_check(&self) -> Result<CheckReport> {
        let lag = self.lagrangian_element()?;
        let big_phi = self.big_phi.as_ref().ok_or(Error::HamiltonActionRequired)?;
        let mut report =
            CheckReport::new(format!("lagrangian class: {}", self.model.name()));
        let names = self.liealg.names();
        for a in 0..self.liealg.dimension() {
            Self::push_zero_element(
                &mut report,
                format!("j({}) L = 0", names[a]),
                &self.j[a].apply(&lag)?,
            );
            Self::push_zero_element(
                &mut report,
                format!("l({}) L = 0", names[a]),
                &self.l[a].apply(&lag)?,
            );
        }
        // The primitive: y_i Xt^i - Phi + 1/2 pi y y - 1/2 varpi y y.
        let n = self.model.dimension();
        let mut xi = SuperPolynomial::zero(&self.table);
        for i in 0..n {
            xi = xi.add(
                &gen(&self.table, &self.ys[i]).mul(&gen(&self.table, &self.xt[i]))?,
            )?;
        }
        xi = xi.sub(big_phi)?;
        xi = xi.add(&self.bivector_element(&self.pi))?;
        xi = xi.sub(&self.bivector_element(&self.varpi))?;
        let residual = self.s.apply(&lag)?.sub(&self.d.apply(&xi)?)?;
        Self::push_zero_element(&mut report, "s L = d Xi".into(), &residual);
        Ok(report)
    }

    /// Per-coordinate residual of d applied to the first field equation
    /// Xt^i + pi^{ij} y_j, evaluated on shell. Zero exactly when the
    /// field equations are integrable.
    pub fn integrability_obstruction(&self) -> Result<Vec<SuperPolynomial>> {
        let big_phi = self.big_phi.as_ref().ok_or(Error::HamiltonActionRequired)?;
        let n = self.model.dimension();
        let coords = self.model.coords();
        let mut on_shell: BTreeMap<String, SuperPolynomial> = BTreeMap::new();
        for kk in 0..n {
            let mut x_img = SuperPolynomial::zero(&self.table);
            for ll in 0..n {
                x_img = x_img.sub(&self.pi[kk][ll].mul(&gen(&self.table, &self.ys[ll]))?)?;
            }
            on_shell.insert(self.xt[kk].clone(), x_img);
            let mut y_img = big_phi.partial_even(&coords[kk])?;
            for aa in 0..n {
                for bb in 0..n {
                    let dp = self.pi[aa][bb].partial_even(&coords[kk])?;
                    let term = dp
                        .mul(&gen(&self.table, &self.ys[aa]))?
                        .mul(&gen(&self.table, &self.ys[bb]))?;
                    y_img = y_img.sub(&term.scale(&ratio(1, 2)))?;
                }
            }
            on_shell.insert(self.yt[kk].clone(), y_img);
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut eq = gen(&self.table, &self.xt[i]);
            for jj in 0..n {
                eq = eq.add(&self.pi[i][jj].mul(&gen(&self.table, &self.ys[jj]))?)?;
            }
            let deq = self.d.apply(&eq)?;
            out.push(deq.substitute(&on_shell, &self.table)?);
        }
        Ok(out)
    }

    /// Classify an element as a multivector (x,y) or a form (x,Xt).
    pub fn classify(&self, o: &SuperPolynomial) -> Result<ElementKind> {
        let uses_y = self.ys.iter().any(|name| o.involves(name));
        let uses_xt = self.xt.iter().any(|name| o.involves(name));
        let uses_other = self
            .yt
            .iter()
            .chain(self.gamma.iter())
            .chain(self.big_gamma.iter())
            .any(|name| o.involves(name));
        if uses_other || (uses_y && uses_xt) {
            return Err(Error::MixedElement);
        }
        Ok(if uses_xt {
            ElementKind::Form
        } else {
            ElementKind::Multivector
        })
    }

    fn de_rham(&self) -> Result<Derivation> {
        let mut dm = Derivation::new("d_M", 1, &self.table);
        dm.fill_zero();
        for (i, c) in self.model.coords().iter().enumerate() {
            dm.set_action(c, gen(&self.table, &self.xt[i]))?;
        }
        Ok(dm)
    }

    fn vf_form_contraction(&self, a: usize) -> Result<Derivation> {
        let mut jm = Derivation::new("j_M", -1, &self.table);
        jm.fill_zero();
        for i in 0..self.model.dimension() {
            jm.set_action(&self.xt[i], self.v[a][i].clone())?;
        }
        Ok(jm)
    }

    /// Hypotheses and conclusions for a representative of an
    /// equivariant class, in the multivector or form branch.
    pub fn equivariant_class_check(&self, o: &SuperPolynomial) -> Result<CheckReport> {
        let kind = self.classify(o)?;
        let mut report = CheckReport::new(format!("equivariant class: {}", self.model.name()));
        let names = self.liealg.names();
        let m = self.liealg.dimension();
        match kind {
            ElementKind::Multivector => {
                let hams = self.hams.as_ref().ok_or(Error::HamiltonActionRequired)?;
                for a in 0..m {
                    Self::push_zero_element(
                        &mut report,
                        format!("[h_{}, beta] = 0", names[a]),
                        &self.schouten(&hams[a], o)?,
                    );
                }
                Self::push_zero_element(&mut report, "q beta = 0".into(), &self.q(o)?);
                for a in 0..m {
                    Self::push_zero_element(
                        &mut report,
                        format!("j({}) beta = 0", names[a]),
                        &self.j[a].apply(o)?,
                    );
                    Self::push_zero_element(
                        &mut report,
                        format!("l({}) beta = 0", names[a]),
                        &self.l[a].apply(o)?,
                    );
                }
                let residual = self.s.apply(o)?.sub(&self.d.apply(o)?)?;
                Self::push_zero_element(&mut report, "s beta = d beta".into(), &residual);
            }
            ElementKind::Form => {
                let h = self.h.as_ref().ok_or(Error::HamiltonActionRequired)?;
                let dm = self.de_rham()?;
                let dmo = dm.apply(o)?;
                Self::push_zero_element(
                    &mut report,
                    "k dM sigma = 0".into(),
                    &self.k.apply(&dmo)?,
                );
                for a in 0..m {
                    Self::push_zero_element(
                        &mut report,
                        format!("j({}) sigma = 0", names[a]),
                        &self.j[a].apply(o)?,
                    );
                    let jm = self.vf_form_contraction(a)?;
                    let residual = self
                        .l[a]
                        .apply(o)?
                        .sub(&self.d.apply(&jm.apply(o)?)?)?;
                    Self::push_zero_element(
                        &mut report,
                        format!("l({}) sigma = d jM(v_{}) sigma", names[a], names[a]),
                        &residual,
                    );
                }
                let residual = self
                    .s
                    .apply(o)?
                    .sub(&self.d.apply(&o.sub(&h.apply(o)?)?)?)?;
                Self::push_zero_element(
                    &mut report,
                    "s sigma = d(sigma - h sigma)".into(),
                    &residual,
                );
            }
        }
        Ok(report)
    }

    /// Conditions under which the element survives as an observable of
    /// the deformed differential w_pi, with the exact decomposition of
    /// w_pi on the element verified as an identity.
    pub fn bv_observable_check(&self, o: &SuperPolynomial) -> Result<CheckReport> {
        let kind = self.classify(o)?;
        let w = self.w_pi.as_ref().ok_or(Error::HamiltonActionRequired)?;
        let big_phi = self.big_phi.as_ref().ok_or(Error::HamiltonActionRequired)?;
        let mut report = CheckReport::new(format!("observable: {}", self.model.name()));
        let names = self.liealg.names();
        let m = self.liealg.dimension();
        match kind {
            ElementKind::Multivector => {
                let hams = self.hams.as_ref().ok_or(Error::HamiltonActionRequired)?;
                let decomposition = self
                    .d
                    .apply(o)?
                    .sub(&self.q_pi(o)?)?
                    .add(&self.schouten(big_phi, o)?)?;
                let residual = w.apply(o)?.sub(&decomposition)?;
                Self::push_zero_element(
                    &mut report,
                    "w_pi beta = d beta - [pi,beta] + [Phi,beta]".into(),
                    &residual,
                );
                for a in 0..m {
                    Self::push_zero_element(
                        &mut report,
                        format!("[h_{}, beta] = 0", names[a]),
                        &self.schouten(&hams[a], o)?,
                    );
                }
                Self::push_zero_element(&mut report, "q beta = 0".into(), &self.q(o)?);
                Self::push_zero_element(&mut report, "q_pi beta = 0".into(), &self.q_pi(o)?);
                let residual = w.apply(o)?.sub(&self.d.apply(o)?)?;
                Self::push_zero_element(&mut report, "w_pi beta = d beta".into(), &residual);
            }
            ElementKind::Form => {
                let dm = self.de_rham()?;
                let dmo = dm.apply(o)?;
                let exact_part = self.d.apply(&o.sub(&self.k_pi.apply(o)?)?)?;
                let residual = w
                    .apply(o)?
                    .sub(&exact_part.add(&self.k_pi.apply(&dmo)?)?)?;
                Self::push_zero_element(
                    &mut report,
                    "w_pi sigma = d(sigma - k_pi sigma) + k_pi dM sigma".into(),
                    &residual,
                );
                Self::push_zero_element(
                    &mut report,
                    "k dM sigma = 0".into(),
                    &self.k.apply(&dmo)?,
                );
                Self::push_zero_element(
                    &mut report,
                    "k_pi dM sigma = 0".into(),
                    &self.k_pi.apply(&dmo)?,
                );
                let residual = w.apply(o)?.sub(&exact_part)?;
                Self::push_zero_element(
                    &mut report,
                    "w_pi sigma = d(sigma - k_pi sigma)".into(),
                    &residual,
                );
            }
        }
        Ok(report)
    }

    /// Intertwining of the generator shifts: the starred doublet rules
    /// against the plain ones under Xs = X - varpi y, and the context
    /// rules against the starred ones under Xt = Xs - omega.
    pub fn shift_consistency_check(&self) -> Result<CheckReport> {
        let mut report =
            CheckReport::new(format!("generator shifts: {}", self.model.name()));
        self.bivector_shift_check(&mut report, false)?;
        self.weil_shift_check(&mut report)?;
        Ok(report)
    }

    fn doublet_table(&self, xn: &[String], yn: &[String], weil: bool) -> Arc<GeneratorTable> {
        let mut defs: Vec<GeneratorDef> = Vec::new();
        for c in self.model.coords() {
            defs.push(GeneratorDef {
                name: c.clone(),
                degree: 0,
                kind: GenKind::Coordinate,
            });
        }
        for p in self.model.params() {
            defs.push(GeneratorDef {
                name: p.clone(),
                degree: 0,
                kind: GenKind::Parameter,
            });
        }
        let mut fields: Vec<(&[String], u32)> =
            vec![(&self.ys, 1), (xn, 1), (yn, 2)];
        if weil {
            fields.push((&self.gamma, 1));
            fields.push((&self.big_gamma, 2));
        }
        for (names, degree) in fields {
            for name in names {
                defs.push(GeneratorDef {
                    name: name.clone(),
                    degree,
                    kind: GenKind::Field,
                });
            }
        }
        GeneratorTable::new(defs)
    }

    fn lift_vf(
        &self,
        table: &Arc<GeneratorTable>,
        a: usize,
    ) -> Result<Vec<SuperPolynomial>> {
        let vars = self.model.vars();
        self.v[a]
            .iter()
            .map(|c| {
                let p = crate::poisson::to_polynomial(c, vars)?;
                SuperPolynomial::from_polynomial(table, &p)
            })
            .collect()
    }

    /// `flip_sign` negates the shift; used as a falsification control.
    pub(crate) fn bivector_shift_check(
        &self,
        report: &mut CheckReport,
        flip_sign: bool,
    ) -> Result<()> {
        let n = self.model.dimension();
        let coords = self.model.coords();
        let xf = indexed("Xf", n);
        let yf = indexed("Yf", n);
        let xs = indexed("Xs", n);
        let ys_star = indexed("Ys", n);
        let t_fund = self.doublet_table(&xf, &yf, false);
        let t_star = self.doublet_table(&xs, &ys_star, false);
        let w_fund = lift_matrix(&t_fund, &self.model.bivector_matrix(Bivector::Varpi))?;
        let w_star = lift_matrix(&t_star, &self.model.bivector_matrix(Bivector::Varpi))?;
        let zero_row = vec![SuperPolynomial::zero(&t_fund); n];
        let zero_matrix = vec![zero_row; n];

        let mut s_fund =
            bivector_s("s", &t_fund, coords, &self.ys, &xf, &yf, &zero_matrix)?;
        s_fund.fill_zero();
        let mut s_star = bivector_s("s*", &t_star, coords, &self.ys, &xs, &ys_star, &w_star)?;
        s_star.fill_zero();

        // Xs -> Xf - varpi y, Ys -> Yf - 1/2 d varpi y y.
        let sign = if flip_sign { ratio(1, 1) } else { ratio(-1, 1) };
        let mut images: BTreeMap<String, SuperPolynomial> = BTreeMap::new();
        for i in 0..n {
            let mut xi = gen(&t_fund, &xf[i]);
            for jj in 0..n {
                let term = w_fund[i][jj].mul(&gen(&t_fund, &self.ys[jj]))?;
                xi = xi.add(&term.scale(&sign))?;
            }
            images.insert(xs[i].clone(), xi);
            let mut yi = gen(&t_fund, &yf[i]);
            for jj in 0..n {
                for kk in 0..n {
                    let dw = w_fund[jj][kk].partial_even(&coords[i])?;
                    let term = dw
                        .mul(&gen(&t_fund, &self.ys[jj]))?
                        .mul(&gen(&t_fund, &self.ys[kk]))?;
                    yi = yi.add(&term.scale(&(sign.clone() * ratio(1, 2))))?;
                }
            }
            images.insert(ys_star[i].clone(), yi);
        }

        let mut pairs: Vec<(String, Derivation, Derivation)> =
            vec![("s".into(), s_star, s_fund)];
        for a in 0..self.liealg.dimension() {
            let name = &self.liealg.names()[a];
            let u_star = self.lift_vf(&t_star, a)?;
            let u_fund = self.lift_vf(&t_fund, a)?;
            let mut j_star = vf_contraction("j*", &t_star, coords, &self.ys, &xs, &ys_star, &u_star)?;
            j_star.fill_zero();
            let mut j_fund = vf_contraction("j", &t_fund, coords, &self.ys, &xf, &yf, &u_fund)?;
            j_fund.fill_zero();
            pairs.push((format!("j({name})"), j_star, j_fund));
            let mut l_star = vf_lie("l*", &t_star, coords, &self.ys, &xs, &ys_star, &u_star)?;
            l_star.fill_zero();
            let mut l_fund = vf_lie("l", &t_fund, coords, &self.ys, &xf, &yf, &u_fund)?;
            l_fund.fill_zero();
            pairs.push((format!("l({name})"), l_star, l_fund));
        }

        for (label, der_star, der_fund) in &pairs {
            let mut witness = None;
            for def in t_star.entries() {
                let g = SuperPolynomial::generator(&t_star, &def.name)?;
                let lhs = der_star.apply(&g)?.substitute(&images, &t_fund)?;
                let rhs = der_fund.apply(&g.substitute(&images, &t_fund)?)?;
                let diff = lhs.sub(&rhs)?;
                if !diff.is_zero() {
                    witness = Some(format!("{}: {}", def.name, diff));
                    break;
                }
            }
            let item_label = format!("bivector shift intertwines {label}");
            match witness {
                None => report.push(CheckItem::pass(item_label)),
                Some(wit) => report.push(CheckItem::fail(item_label, wit)),
            }
        }
        Ok(())
    }

    fn weil_shift_check(&self, report: &mut CheckReport) -> Result<()> {
        let n = self.model.dimension();
        let m = self.liealg.dimension();
        let coords = self.model.coords();
        let xs = indexed("Xs", n);
        let ys_star = indexed("Ys", n);
        let t_star = self.doublet_table(&xs, &ys_star, true);
        let w_star = lift_matrix(&t_star, &self.model.bivector_matrix(Bivector::Varpi))?;
        let sc = |b: usize, c: usize, a: usize| self.liealg.structure_constant(b, c, a).clone();

        // The starred operation extended by the Weil differential.
        let mut s_star = bivector_s("s*", &t_star, coords, &self.ys, &xs, &ys_star, &w_star)?;
        for a in 0..m {
            let mut sg = gen(&t_star, &self.big_gamma[a]);
            let mut sbg = SuperPolynomial::zero(&t_star);
            for b in 0..m {
                for c in 0..m {
                    let coeff = sc(b, c, a);
                    if coeff.is_zero() {
                        continue;
                    }
                    let gg = gen(&t_star, &self.gamma[b]).mul(&gen(&t_star, &self.gamma[c]))?;
                    sg = sg.sub(&gg.scale(&(coeff.clone() * ratio(1, 2))))?;
                    let gbg =
                        gen(&t_star, &self.gamma[b]).mul(&gen(&t_star, &self.big_gamma[c]))?;
                    sbg = sbg.sub(&gbg.scale(&coeff))?;
                }
            }
            s_star.set_action(&self.gamma[a], sg)?;
            s_star.set_action(&self.big_gamma[a], sbg)?;
        }

        // omega in the starred table.
        let mut omega_star: Vec<SuperPolynomial> = Vec::with_capacity(n);
        for i in 0..n {
            let mut o = SuperPolynomial::zero(&t_star);
            for a in 0..m {
                let u = self.lift_vf(&t_star, a)?;
                o = o.add(&gen(&t_star, &self.gamma[a]).mul(&u[i])?)?;
            }
            omega_star.push(o);
        }

        // Xt -> Xs - omega, Yt -> Ys + d omega y.
        let mut images: BTreeMap<String, SuperPolynomial> = BTreeMap::new();
        for i in 0..n {
            images.insert(self.xt[i].clone(), gen(&t_star, &xs[i]).sub(&omega_star[i])?);
            let mut yi = gen(&t_star, &ys_star[i]);
            for jj in 0..n {
                let dom = omega_star[jj].partial_even(&coords[i])?;
                yi = yi.add(&dom.mul(&gen(&t_star, &self.ys[jj]))?)?;
            }
            images.insert(self.yt[i].clone(), yi);
        }

        let mut pairs: Vec<(String, &Derivation, Derivation)> = Vec::new();
        pairs.push(("s".into(), &self.s, s_star));
        let mut star_j: Vec<Derivation> = Vec::new();
        let mut star_l: Vec<Derivation> = Vec::new();
        for a in 0..m {
            let u = self.lift_vf(&t_star, a)?;
            let mut j_star = vf_contraction("j*", &t_star, coords, &self.ys, &xs, &ys_star, &u)?;
            j_star.fill_zero();
            j_star.set_action(&self.gamma[a], SuperPolynomial::one(&t_star))?;
            star_j.push(j_star);
            let mut l_star = vf_lie("l*", &t_star, coords, &self.ys, &xs, &ys_star, &u)?;
            for b in 0..m {
                let mut lg = SuperPolynomial::zero(&t_star);
                let mut lbg = SuperPolynomial::zero(&t_star);
                for c in 0..m {
                    let coeff = sc(a, c, b);
                    if coeff.is_zero() {
                        continue;
                    }
                    lg = lg.sub(&gen(&t_star, &self.gamma[c]).scale(&coeff))?;
                    lbg = lbg.sub(&gen(&t_star, &self.big_gamma[c]).scale(&coeff))?;
                }
                l_star.set_action(&self.gamma[b], lg)?;
                l_star.set_action(&self.big_gamma[b], lbg)?;
            }
            star_l.push(l_star);
        }
        for a in 0..m {
            let name = &self.liealg.names()[a];
            pairs.push((format!("j({name})"), &self.j[a], star_j[a].clone()));
            pairs.push((format!("l({name})"), &self.l[a], star_l[a].clone()));
        }

        for (label, der_ctx, der_star) in &pairs {
            let mut witness = None;
            for def in self.table.entries() {
                let g = SuperPolynomial::generator(&self.table, &def.name)?;
                let lhs = der_ctx.apply(&g)?.substitute(&images, &t_star)?;
                let rhs = der_star.apply(&g.substitute(&images, &t_star)?)?;
                let diff = lhs.sub(&rhs)?;
                if !diff.is_zero() {
                    witness = Some(format!("{}: {}", def.name, diff));
                    break;
                }
            }
            let item_label = format!("weil shift intertwines {label}");
            match witness {
                None => report.push(CheckItem::pass(item_label)),
                Some(wit) => report.push(CheckItem::fail(item_label, wit)),
            }
        }
        Ok(())
    }
}
