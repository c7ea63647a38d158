//! Exact multivariate polynomial arithmetic over named variables.
//!
//! Variables are either coordinates (differentiable) or parameters
//! (formal constants). Terms are stored sparsely, keyed by dense
//! exponent vectors; coefficients are exact rationals and zero
//! coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableKind {
    Coordinate,
    Parameter,
}

/// Ordered list of variable names with their kinds.
#[derive(Debug, PartialEq, Eq)]
pub struct VariableSet {
    names: Vec<String>,
    kinds: Vec<VariableKind>,
}

impl VariableSet {
    pub fn new(
        coordinates: impl IntoIterator<Item = impl Into<String>>,
        parameters: impl IntoIterator<Item = impl Into<String>>,
    ) -> Arc<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut kinds = Vec::new();
        for c in coordinates {
            names.push(c.into());
            kinds.push(VariableKind::Coordinate);
        }
        for p in parameters {
            names.push(p.into());
            kinds.push(VariableKind::Parameter);
        }
        Arc::new(VariableSet { names, kinds })
    }

    /// All names coordinates.
    pub fn coords(names: impl IntoIterator<Item = impl Into<String>>) -> Arc<Self> {
        Self::new(names, Vec::<String>::new())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, idx: usize) -> VariableKind {
        self.kinds[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Sparse polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Arc<VariableSet>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Arc<VariableSet>) -> Self {
        Polynomial {
            vars: Arc::clone(vars),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VariableSet>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Arc<VariableSet>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Arc<VariableSet>, name: &str) -> Result<Self> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(exps, Rational::one());
        Ok(p)
    }

    pub fn vars(&self) -> &Arc<VariableSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableSetMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(&self.vars);
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..n {
            out = out.mul(self).expect("same variable set");
        }
        out
    }

    /// Partial derivative with respect to a coordinate. Parameters are
    /// formal constants and admit no derivative operator.
    pub fn partial_derivative(&self, coordinate: &str) -> Result<Self> {
        let idx = self
            .vars
            .index_of(coordinate)
            .ok_or_else(|| Error::UnknownIdentifier(coordinate.to_string()))?;
        if self.vars.kind(idx) != VariableKind::Coordinate {
            return Err(Error::NotACoordinate(coordinate.to_string()));
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[idx] = k - 1;
            out.add_term(exps, c.clone() * Rational::from_integer(k.into()));
        }
        Ok(out)
    }

    /// Exact evaluation; every variable must be assigned.
    pub fn evaluate_at(&self, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let values: Vec<Rational> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                point
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::MissingAssignment(n.clone()))
            })
            .collect::<Result<_>>()?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (idx, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= values[idx].clone();
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute a polynomial (over a common target variable set) for
    /// each variable.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.vars.len() {
            return Err(Error::VariableSetMismatch);
        }
        let target = images
            .first()
            .map(|p| Arc::clone(&p.vars))
            .ok_or(Error::VariableSetMismatch)?;
        let mut acc = Polynomial::zero(&target);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (idx, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[idx].pow(k))?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Substitute rational values for a subset of variables, returning a
    /// polynomial over the same variable set.
    pub fn substitute_values(&self, values: &BTreeMap<String, Rational>) -> Result<Polynomial> {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = e.clone();
            for (idx, name) in self.vars.names().iter().enumerate() {
                if let Some(v) = values.get(name) {
                    for _ in 0..exps[idx] {
                        coeff *= v.clone();
                    }
                    exps[idx] = 0;
                }
            }
            out.add_term(exps, coeff);
        }
        Ok(out)
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Rational, leading: bool, has_vars: bool) -> fmt::Result {
    let neg = c < &Rational::zero();
    let abs = if neg { -c.clone() } else { c.clone() };
    if leading {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if !abs.is_one() || !has_vars {
        write!(f, "{}", abs)?;
        if has_vars {
            write!(f, "*")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest-degree terms first for readability.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(ea, _), (eb, _)| {
            let da: u32 = ea.iter().sum();
            let db: u32 = eb.iter().sum();
            db.cmp(&da).then(eb.cmp(ea))
        });
        for (i, (e, c)) in terms.iter().enumerate() {
            let has_vars = e.iter().any(|&k| k > 0);
            write_coeff(f, c, i == 0, has_vars)?;
            let mut first = true;
            for (idx, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.vars.names()[idx])?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}
