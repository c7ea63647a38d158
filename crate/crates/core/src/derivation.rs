//! Graded derivations of the free algebra, determined by their values
//! on generators and extended by the graded Leibniz rule.
//!
//! Because the algebra is finitely generated, two derivations of the
//! same degree coincide exactly when they agree on every generator, so
//! operator identities are decided generator by generator.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::super_poly::{GenKind, GeneratorTable, SuperPolynomial};

#[derive(Debug, Clone)]
pub struct Derivation {
    label: String,
    degree: i64,
    table: Arc<GeneratorTable>,
    action: Vec<Option<SuperPolynomial>>,
}

impl Derivation {
    /// New derivation with no generator actions set except that
    /// parameters are annihilated.
    pub fn new(label: impl Into<String>, degree: i64, table: &Arc<GeneratorTable>) -> Self {
        let mut action: Vec<Option<SuperPolynomial>> = vec![None; table.len()];
        for (idx, def) in table.entries().iter().enumerate() {
            if def.kind == GenKind::Parameter {
                action[idx] = Some(SuperPolynomial::zero(table));
            }
        }
        Derivation {
            label: label.into(),
            degree,
            table: Arc::clone(table),
            action,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    /// Set the action on a generator; the value must be homogeneous of
    /// degree `deg(gen) + deg(derivation)` unless zero.
    pub fn set_action(&mut self, name: &str, value: SuperPolynomial) -> Result<()> {
        let idx = self
            .table
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        if let Some(d) = value.homogeneous_degree() {
            let expected = i64::from(self.table.degree_of(idx)) + self.degree;
            if d != expected {
                return Err(Error::DegreeMismatch {
                    name: name.to_string(),
                    expected,
                    got: d,
                });
            }
        }
        self.action[idx] = Some(value);
        Ok(())
    }

    pub fn set_zero(&mut self, name: &str) -> Result<()> {
        self.set_action(name, SuperPolynomial::zero(&self.table))
    }

    /// Annihilate every generator whose action is still unset.
    pub fn fill_zero(&mut self) {
        for a in &mut self.action {
            if a.is_none() {
                *a = Some(SuperPolynomial::zero(&self.table));
            }
        }
    }

    pub fn action_on(&self, name: &str) -> Result<&SuperPolynomial> {
        let idx = self
            .table
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        self.action[idx]
            .as_ref()
            .ok_or_else(|| Error::MissingGeneratorAction(name.to_string()))
    }

    fn action_idx(&self, idx: usize) -> Result<&SuperPolynomial> {
        self.action[idx]
            .as_ref()
            .ok_or_else(|| Error::MissingGeneratorAction(self.table.entries()[idx].name.clone()))
    }

    /// Apply by the graded Leibniz rule. A term is a product of even
    /// factors followed by odd factors in canonical order; passing the
    /// derivation over p odd factors costs `(-1)^(deg * p)`.
    pub fn apply(&self, a: &SuperPolynomial) -> Result<SuperPolynomial> {
        if self.table != *a.table() {
            return Err(Error::TableMismatch);
        }
        let odd_degree = self.degree.rem_euclid(2) == 1;
        let mut out = SuperPolynomial::zero(&self.table);
        for (even, odd, coeff) in a.terms_named() {
            // even factors: the prefix is even, no sign
            for (name, k) in &even {
                let idx = self.table.index_of(name).unwrap();
                let act = self.action_idx(idx)?;
                if act.is_zero() {
                    continue;
                }
                let mut rest = SuperPolynomial::constant(
                    &self.table,
                    coeff.clone() * Rational::from_integer((*k).into()),
                );
                for (n2, k2) in &even {
                    let kk = if n2 == name { *k2 - 1 } else { *k2 };
                    if kk > 0 {
                        rest = rest.mul(&SuperPolynomial::generator(&self.table, n2)?.pow(kk))?;
                    }
                }
                let mut piece = act.mul(&rest)?;
                for n2 in &odd {
                    piece = piece.mul(&SuperPolynomial::generator(&self.table, n2)?)?;
                }
                out = out.add(&piece)?;
            }
            // odd factors in canonical order
            for (p, name) in odd.iter().enumerate() {
                let idx = self.table.index_of(name).unwrap();
                let act = self.action_idx(idx)?;
                if act.is_zero() {
                    continue;
                }
                let mut c = coeff.clone();
                if odd_degree && p % 2 == 1 {
                    c = -c;
                }
                let mut piece = SuperPolynomial::constant(&self.table, c);
                for (n2, k2) in &even {
                    piece = piece.mul(&SuperPolynomial::generator(&self.table, n2)?.pow(*k2))?;
                }
                for n2 in odd.iter().take(p) {
                    piece = piece.mul(&SuperPolynomial::generator(&self.table, n2)?)?;
                }
                piece = piece.mul(act)?;
                for n2 in odd.iter().skip(p + 1) {
                    piece = piece.mul(&SuperPolynomial::generator(&self.table, n2)?)?;
                }
                out = out.add(&piece)?;
            }
        }
        Ok(out)
    }

    /// Graded commutator `[d1,d2] = d1 d2 - (-1)^(deg1*deg2) d2 d1`,
    /// itself a derivation; returned through its generator actions.
    pub fn commutator(d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
        if d1.table != d2.table {
            return Err(Error::TableMismatch);
        }
        let sign_flip = (d1.degree * d2.degree).rem_euclid(2) == 1;
        let mut out = Derivation::new(
            format!("[{},{}]", d1.label, d2.label),
            d1.degree + d2.degree,
            &d1.table,
        );
        for def in d1.table.entries().to_vec() {
            let g = SuperPolynomial::generator(&d1.table, &def.name)?;
            let a = d1.apply(&d2.apply(&g)?)?;
            let b = d2.apply(&d1.apply(&g)?)?;
            let val = if sign_flip { a.add(&b)? } else { a.sub(&b)? };
            out.set_action(&def.name, val)?;
        }
        Ok(out)
    }

    /// Rational linear combination of derivations of one common degree.
    pub fn linear_combination(
        label: impl Into<String>,
        terms: &[(Rational, &Derivation)],
    ) -> Result<Derivation> {
        let (_, first) = terms.first().ok_or(Error::TableMismatch)?;
        let mut out = Derivation::new(label, first.degree, &first.table);
        for def in first.table.entries().to_vec() {
            let mut acc = SuperPolynomial::zero(&first.table);
            for (c, d) in terms {
                if d.table != first.table || d.degree != first.degree {
                    return Err(Error::TableMismatch);
                }
                acc = acc.add(&d.action_on(&def.name)?.scale(c))?;
            }
            out.set_action(&def.name, acc)?;
        }
        Ok(out)
    }

    /// First generator where the two derivations differ, with the
    /// residual, or None when they agree everywhere.
    pub fn difference_witness(
        &self,
        other: &Derivation,
    ) -> Result<Option<(String, SuperPolynomial)>> {
        if self.table != other.table {
            return Err(Error::TableMismatch);
        }
        for def in self.table.entries() {
            let diff = self.action_on(&def.name)?.sub(other.action_on(&def.name)?)?;
            if !diff.is_zero() {
                return Ok(Some((def.name.clone(), diff)));
            }
        }
        Ok(None)
    }

    /// First generator with a nonzero action, with that action, or None
    /// when the derivation vanishes on all generators.
    pub fn nonzero_witness(&self) -> Result<Option<(String, SuperPolynomial)>> {
        for def in self.table.entries() {
            let act = self.action_on(&def.name)?;
            if !act.is_zero() {
                return Ok(Some((def.name.clone(), act.clone())));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (degree {})", self.label, self.degree)?;
        for def in self.table.entries() {
            match self.action_on(&def.name) {
                Ok(v) => writeln!(f, "  {} -> {}", def.name, v)?,
                Err(_) => writeln!(f, "  {} -> <unset>", def.name)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::super_poly::GeneratorDef;

    fn table() -> Arc<GeneratorTable> {
        GeneratorTable::new(vec![
            GeneratorDef {
                name: "x1".into(),
                degree: 0,
                kind: GenKind::Coordinate,
            },
            GeneratorDef {
                name: "x2".into(),
                degree: 0,
                kind: GenKind::Coordinate,
            },
            GeneratorDef {
                name: "y1".into(),
                degree: 1,
                kind: GenKind::Field,
            },
            GeneratorDef {
                name: "y2".into(),
                degree: 1,
                kind: GenKind::Field,
            },
            GeneratorDef {
                name: "Yt1".into(),
                degree: 2,
                kind: GenKind::Field,
            },
        ])
    }

    fn gen(t: &Arc<GeneratorTable>, n: &str) -> SuperPolynomial {
        SuperPolynomial::generator(t, n).unwrap()
    }

    #[test]
    fn leibniz_on_even_power() {
        let t = table();
        let mut d = Derivation::new("d", 0, &t);
        d.set_action("x1", gen(&t, "x2")).unwrap();
        d.fill_zero();
        let x1 = gen(&t, "x1");
        let p = x1.pow(3);
        // d(x1^3) = 3 x1^2 x2
        let expected = x1.pow(2).mul(&gen(&t, "x2")).unwrap().scale(&rat(3));
        assert_eq!(d.apply(&p).unwrap(), expected);
    }

    #[test]
    fn odd_derivation_sign_on_odd_product() {
        let t = table();
        // degree +1 derivation: y1 -> Yt1, y2 -> 0
        let mut d = Derivation::new("s", 1, &t);
        d.set_action("y1", gen(&t, "Yt1")).unwrap();
        d.fill_zero();
        let p = gen(&t, "y1").mul(&gen(&t, "y2")).unwrap();
        // s(y1 y2) = Yt1 y2  (no sign on the first factor)
        assert_eq!(
            d.apply(&p).unwrap(),
            gen(&t, "Yt1").mul(&gen(&t, "y2")).unwrap()
        );
        let q = gen(&t, "y2").mul(&gen(&t, "y1")).unwrap();
        // s(y2 y1) = -y2 Yt1 ... = s(-y1 y2) = -Yt1 y2
        assert_eq!(
            d.apply(&q).unwrap(),
            gen(&t, "Yt1").mul(&gen(&t, "y2")).unwrap().neg()
        );
    }

    #[test]
    fn leibniz_property_random_pairs() {
        let t = table();
        let mut d = Derivation::new("s", 1, &t);
        d.set_action("x1", gen(&t, "y1")).unwrap();
        d.set_action("x2", gen(&t, "y2")).unwrap();
        d.set_action("y1", gen(&t, "Yt1")).unwrap();
        d.set_action("y2", gen(&t, "Yt1").scale(&ratio(1, 2)))
            .unwrap();
        d.set_zero("Yt1").unwrap();

        let elems = [
            gen(&t, "x1").mul(&gen(&t, "y1")).unwrap(),
            gen(&t, "x2").pow(2).mul(&gen(&t, "Yt1")).unwrap(),
            gen(&t, "y1").mul(&gen(&t, "y2")).unwrap(),
            gen(&t, "x1").mul(&gen(&t, "y2")).unwrap().scale(&rat(-2)),
        ];
        for a in &elems {
            for b in &elems {
                let lhs = d.apply(&a.mul(b).unwrap()).unwrap();
                let da = a.homogeneous_degree().unwrap();
                let mut rhs = d.apply(a).unwrap().mul(b).unwrap();
                let second = a.mul(&d.apply(b).unwrap()).unwrap();
                rhs = if da % 2 == 1 {
                    rhs.sub(&second).unwrap()
                } else {
                    rhs.add(&second).unwrap()
                };
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn commutator_of_odd_with_itself() {
        let t = table();
        // s: x -> y, y -> Yt, Yt -> 0 squares to: x -> Yt (via s(y)),
        // so [s,s] acts as 2 s^2.
        let mut s = Derivation::new("s", 1, &t);
        s.set_action("x1", gen(&t, "y1")).unwrap();
        s.set_action("y1", gen(&t, "Yt1")).unwrap();
        s.set_zero("x2").unwrap();
        s.set_zero("y2").unwrap();
        s.set_zero("Yt1").unwrap();
        let c = Derivation::commutator(&s, &s).unwrap();
        assert_eq!(
            c.action_on("x1").unwrap(),
            &gen(&t, "Yt1").scale(&rat(2))
        );
        assert!(c.action_on("y1").unwrap().is_zero());
    }

    #[test]
    fn missing_action_is_reported() {
        let t = table();
        let d = Derivation::new("d", 0, &t);
        let p = gen(&t, "x1");
        assert!(matches!(
            d.apply(&p),
            Err(Error::MissingGeneratorAction(_))
        ));
    }
}
