//! Free graded-commutative algebra over a declared generator table.
//!
//! Parity is degree mod 2. Odd generators square to zero and are kept
//! in canonical (table) order, the exchange sign being absorbed into
//! the coefficient, so every element has a unique normal form and
//! zero-testing is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// Degree-0 generator carrying the chart; derivations act on it.
    Coordinate,
    /// Degree-0 formal constant; every derivation annihilates it.
    Parameter,
    /// Graded field generator.
    Field,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDef {
    pub name: String,
    pub degree: u32,
    pub kind: GenKind,
}

/// Ordered generator table; the order fixes the canonical normal form.
#[derive(Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    entries: Vec<GeneratorDef>,
    even_slot: Vec<Option<usize>>,
    odd_bit: Vec<Option<usize>>,
    even_entries: Vec<usize>,
    odd_entries: Vec<usize>,
}

impl GeneratorTable {
    pub fn new(entries: Vec<GeneratorDef>) -> Arc<Self> {
        let mut even_slot = vec![None; entries.len()];
        let mut odd_bit = vec![None; entries.len()];
        let mut even_entries = Vec::new();
        let mut odd_entries = Vec::new();
        for (idx, e) in entries.iter().enumerate() {
            if e.degree % 2 == 0 {
                even_slot[idx] = Some(even_entries.len());
                even_entries.push(idx);
            } else {
                odd_bit[idx] = Some(odd_entries.len());
                odd_entries.push(idx);
            }
        }
        assert!(odd_entries.len() <= 64, "at most 64 odd generators");
        Arc::new(GeneratorTable {
            entries,
            even_slot,
            odd_bit,
            even_entries,
            odd_entries,
        })
    }

    pub fn entries(&self) -> &[GeneratorDef] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    pub fn degree_of(&self, idx: usize) -> u32 {
        self.entries[idx].degree
    }

    fn n_even(&self) -> usize {
        self.even_entries.len()
    }

    /// Bitmask over odd slots for the named generators.
    pub fn odd_mask(&self, names: &[String]) -> u64 {
        let mut mask = 0u64;
        for n in names {
            if let Some(idx) = self.index_of(n) {
                if let Some(bit) = self.odd_bit[idx] {
                    mask |= 1 << bit;
                }
            }
        }
        mask
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Term {
    even: Vec<u32>,
    odd: u64,
}

impl Term {
    fn unit(table: &GeneratorTable) -> Self {
        Term {
            even: vec![0; table.n_even()],
            odd: 0,
        }
    }
}

/// Sign incurred by merging two canonically ordered odd products.
/// Returns None when the products share a factor (the term vanishes).
fn odd_merge(a: u64, b: u64) -> Option<(u64, bool)> {
    if a & b != 0 {
        return None;
    }
    let mut transpositions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        let above = if j >= 63 { 0 } else { (a >> (j + 1)).count_ones() };
        transpositions += above;
        bb &= bb - 1;
    }
    Some((a | b, transpositions % 2 == 1))
}

/// Normal-form element of the free graded-commutative algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPolynomial {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Term, Rational>,
}

impl SuperPolynomial {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        SuperPolynomial {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<GeneratorTable>, c: Rational) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(Term::unit(table), c);
        }
        p
    }

    pub fn one(table: &Arc<GeneratorTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn generator(table: &Arc<GeneratorTable>, name: &str) -> Result<Self> {
        let idx = table
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let mut term = Term::unit(table);
        if let Some(slot) = table.even_slot[idx] {
            term.even[slot] = 1;
        } else {
            term.odd |= 1 << table.odd_bit[idx].unwrap();
        }
        let mut p = Self::zero(table);
        p.terms.insert(term, Rational::one());
        Ok(p)
    }

    /// Embed a commutative polynomial; its variables must name degree-0
    /// generators of the table.
    pub fn from_polynomial(table: &Arc<GeneratorTable>, poly: &Polynomial) -> Result<Self> {
        let slots: Vec<usize> = poly
            .vars()
            .names()
            .iter()
            .map(|n| {
                let idx = table
                    .index_of(n)
                    .ok_or_else(|| Error::UnknownGenerator(n.clone()))?;
                table.even_slot[idx].ok_or_else(|| Error::UnknownGenerator(n.clone()))
            })
            .collect::<Result<_>>()?;
        let mut out = Self::zero(table);
        for (exps, coeff) in poly.terms() {
            let mut term = Term::unit(table);
            for (vi, &k) in exps.iter().enumerate() {
                term.even[slots[vi]] += k;
            }
            out.add_term(term, coeff.clone());
        }
        Ok(out)
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_table(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.table, &other.table) || self.table == other.table {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    fn add_term(&mut self, term: Term, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(term) {
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_table(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.table);
        for (t, c) in &self.terms {
            out.terms.insert(t.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(&self.table);
        if k.is_zero() {
            return out;
        }
        for (t, c) in &self.terms {
            out.terms.insert(t.clone(), c.clone() * k.clone());
        }
        out
    }

    /// Graded product; associative and graded-commutative by
    /// construction of the normal form.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_table(other)?;
        let mut out = Self::zero(&self.table);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                if let Some((odd, flip)) = odd_merge(ta.odd, tb.odd) {
                    let even: Vec<u32> =
                        ta.even.iter().zip(&tb.even).map(|(a, b)| a + b).collect();
                    let mut coeff = ca.clone() * cb.clone();
                    if flip {
                        coeff = -coeff;
                    }
                    out.add_term(Term { even, odd }, coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.table);
        for _ in 0..n {
            out = out.mul(self).expect("same table");
        }
        out
    }

    fn term_degree(&self, t: &Term) -> i64 {
        let mut d: i64 = 0;
        for (slot, &k) in t.even.iter().enumerate() {
            d += i64::from(k) * i64::from(self.table.degree_of(self.table.even_entries[slot]));
        }
        let mut odd = t.odd;
        while odd != 0 {
            let bit = odd.trailing_zeros() as usize;
            d += i64::from(self.table.degree_of(self.table.odd_entries[bit]));
            odd &= odd - 1;
        }
        d
    }

    /// Degree when homogeneous (zero counts as any degree).
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degree = None;
        for t in self.terms.keys() {
            let d = self.term_degree(t);
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        degree
    }

    /// Split into homogeneous pieces keyed by the count of odd factors
    /// drawn from `family` (a bitmask from [`GeneratorTable::odd_mask`]).
    pub fn split_by_family_count(&self, family: u64) -> BTreeMap<u32, SuperPolynomial> {
        let mut out: BTreeMap<u32, SuperPolynomial> = BTreeMap::new();
        for (t, c) in &self.terms {
            let count = (t.odd & family).count_ones();
            out.entry(count)
                .or_insert_with(|| Self::zero(&self.table))
                .add_term(t.clone(), c.clone());
        }
        out
    }

    /// Maximum count of odd factors from `family` over all terms.
    pub fn max_family_count(&self, family: u64) -> u32 {
        self.terms
            .keys()
            .map(|t| (t.odd & family).count_ones())
            .max()
            .unwrap_or(0)
    }

    /// True when some term contains a factor from `family`.
    pub fn involves_mask(&self, family: u64) -> bool {
        self.terms.keys().any(|t| t.odd & family != 0)
    }

    /// True when some term contains the named generator.
    pub fn involves(&self, name: &str) -> bool {
        let Some(idx) = self.table.index_of(name) else {
            return false;
        };
        if let Some(slot) = self.table.even_slot[idx] {
            self.terms.keys().any(|t| t.even[slot] > 0)
        } else {
            let bit = self.table.odd_bit[idx].unwrap();
            self.terms.keys().any(|t| t.odd & (1 << bit) != 0)
        }
    }

    /// Partial derivative with respect to an even generator.
    pub fn partial_even(&self, name: &str) -> Result<Self> {
        let idx = self
            .table
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let slot = self.table.even_slot[idx]
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let mut out = Self::zero(&self.table);
        for (t, c) in &self.terms {
            let k = t.even[slot];
            if k == 0 {
                continue;
            }
            let mut term = t.clone();
            term.even[slot] = k - 1;
            out.add_term(term, c.clone() * Rational::from_integer(k.into()));
        }
        Ok(out)
    }

    /// Left derivative with respect to an odd generator.
    pub fn partial_odd(&self, name: &str) -> Result<Self> {
        let idx = self
            .table
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let bit = self.table.odd_bit[idx]
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let mask = 1u64 << bit;
        let mut out = Self::zero(&self.table);
        for (t, c) in &self.terms {
            if t.odd & mask == 0 {
                continue;
            }
            // Move the factor to the front past the odd factors below it.
            let below = (t.odd & (mask - 1)).count_ones();
            let mut term = t.clone();
            term.odd &= !mask;
            let coeff = if below % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            out.add_term(term, coeff);
        }
        Ok(out)
    }

    /// Algebra homomorphism substituting an element for each generator.
    /// Generators absent from the map are carried over by name.
    pub fn substitute(
        &self,
        images: &BTreeMap<String, SuperPolynomial>,
        target: &Arc<GeneratorTable>,
    ) -> Result<SuperPolynomial> {
        let mut resolved: Vec<SuperPolynomial> = Vec::with_capacity(self.table.len());
        for def in self.table.entries() {
            let image = match images.get(&def.name) {
                Some(img) => img.clone(),
                None => SuperPolynomial::generator(target, &def.name)?,
            };
            if let Some(d) = image.homogeneous_degree() {
                if d != i64::from(def.degree) {
                    return Err(Error::DegreeMismatch {
                        name: def.name.clone(),
                        expected: i64::from(def.degree),
                        got: d,
                    });
                }
            }
            resolved.push(image);
        }
        let mut out = SuperPolynomial::zero(target);
        for (t, c) in &self.terms {
            let mut acc = SuperPolynomial::constant(target, c.clone());
            for (slot, &k) in t.even.iter().enumerate() {
                if k > 0 {
                    acc = acc.mul(&resolved[self.table.even_entries[slot]].pow(k))?;
                }
            }
            let mut odd = t.odd;
            while odd != 0 {
                let bit = odd.trailing_zeros() as usize;
                acc = acc.mul(&resolved[self.table.odd_entries[bit]])?;
                odd &= odd - 1;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Iterate terms as (even exponents by entry name, odd names, coefficient).
    pub fn terms_named(&self) -> Vec<(Vec<(String, u32)>, Vec<String>, Rational)> {
        let mut out = Vec::new();
        for (t, c) in &self.terms {
            let mut even = Vec::new();
            for (slot, &k) in t.even.iter().enumerate() {
                if k > 0 {
                    even.push((
                        self.table.entries[self.table.even_entries[slot]].name.clone(),
                        k,
                    ));
                }
            }
            let mut odd_names = Vec::new();
            let mut odd = t.odd;
            while odd != 0 {
                let bit = odd.trailing_zeros() as usize;
                odd_names.push(self.table.entries[self.table.odd_entries[bit]].name.clone());
                odd &= odd - 1;
            }
            out.push((even, odd_names, c.clone()));
        }
        out
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (even, odd, c)) in self.terms_named().into_iter().enumerate() {
            let neg = c < Rational::zero();
            let abs = if neg { -c } else { c };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let has_gens = !even.is_empty() || !odd.is_empty();
            if !abs.is_one() || !has_gens {
                write!(f, "{}", abs)?;
                if has_gens {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (name, k) in even {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", name)?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
            for name in odd {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", name)?;
            }
        }
        Ok(())
    }
}
