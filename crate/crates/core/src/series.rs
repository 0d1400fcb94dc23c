//! Truncated multivariate power series with exact rational coefficients.
//!
//! Every variable carries a nonnegative integer weight; a term survives iff
//! its weighted degree is at most the truncation order. `exp` and `log` need
//! every non-constant term to have positive weight, so that powers of the
//! argument eventually vanish.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    vars: Vec<String>,
    weights: Vec<u32>,
    order: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiSeries {
    /// The zero series over `(name, weight)` variables, truncated at `order`.
    pub fn zero(vars: &[(&str, u32)], order: u32) -> Self {
        MultiSeries {
            vars: vars.iter().map(|(n, _)| n.to_string()).collect(),
            weights: vars.iter().map(|&(_, w)| w).collect(),
            order,
            terms: BTreeMap::new(),
        }
    }

    /// Zero series over the same variables and truncation as `self`.
    pub fn zero_like(&self) -> Self {
        MultiSeries {
            vars: self.vars.clone(),
            weights: self.weights.clone(),
            order: self.order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_like(&self, c: Rational) -> Self {
        let mut s = self.zero_like();
        s.add_term(vec![0; self.vars.len()], c);
        s
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(Rational::one())
    }

    pub fn variable_like(&self, name: &str) -> Result<Self> {
        let i = self.index_of(name)?;
        let mut e = vec![0; self.vars.len()];
        e[i] = 1;
        let mut s = self.zero_like();
        s.add_term(e, Rational::one());
        Ok(s)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::domain(format!("series has no variable `{name}`")))
    }

    pub fn weight(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// Adds `c · x^exps`; terms beyond the truncation order are dropped.
    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector length");
        if c.is_zero() || self.weight(&exps) > self.order {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of a monomial given by `(name, exponent)` pairs.
    pub fn coefficient_of(&self, monomial: &[(&str, u32)]) -> Result<Rational> {
        let mut e = vec![0; self.vars.len()];
        for &(name, k) in monomial {
            e[self.index_of(name)?] = k;
        }
        Ok(self.coefficient(&e))
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.vars.len()])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars || self.weights != other.weights || self.order != other.order {
            return Err(Error::domain(format!(
                "series over ({}) at order {} and ({}) at order {} do not combine",
                self.vars.join(","),
                self.order,
                other.vars.join(","),
                other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut s = self.clone();
        for (e, c) in &other.terms {
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = self.zero_like();
        for (e, v) in &self.terms {
            s.add_term(e.clone(), v * c);
        }
        s
    }

    /// Cauchy product, truncated.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut s = self.zero_like();
        for (ea, ca) in &self.terms {
            let wa = self.weight(ea);
            for (eb, cb) in &other.terms {
                if wa + self.weight(eb) > self.order {
                    continue;
                }
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                s.add_term(e, ca * cb);
            }
        }
        Ok(s)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(self.one_like(), |acc, _| acc.mul(self).unwrap())
    }

    fn require_nilpotent(&self, what: &str) -> Result<()> {
        if let Some((e, _)) = self.terms.iter().find(|(e, _)| self.weight(e) == 0) {
            return Err(Error::domain(format!(
                "{what}: term with exponents {e:?} has weight 0, the series would not truncate"
            )));
        }
        Ok(())
    }

    /// `Σ a^k / k!`. Needs a vanishing constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::domain("exp needs a series with zero constant term"));
        }
        self.require_nilpotent("exp")?;
        let mut result = self.one_like();
        let mut term = self.one_like();
        for k in 1.. {
            term = term.mul(self)?.scale(&Rational::new(1.into(), k.into()));
            if term.is_zero() {
                break;
            }
            result = result.add(&term)?;
        }
        Ok(result)
    }

    /// `Σ (-1)^{k+1} (a-1)^k / k`. Needs constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != Rational::one() {
            return Err(Error::domain("log needs a series with constant term 1"));
        }
        let b = self.sub(&self.one_like())?;
        b.require_nilpotent("log")?;
        let mut result = self.zero_like();
        let mut power = self.one_like();
        for k in 1i64.. {
            power = power.mul(&b)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            result = result.add(&power.scale(&Rational::new(sign.into(), k.into())))?;
        }
        Ok(result)
    }

    /// Substitutes a rational value for one variable and drops it.
    pub fn evaluate_at(&self, name: &str, value: &Rational) -> Result<Self> {
        let i = self.index_of(name)?;
        let mut vars = self.vars.clone();
        let mut weights = self.weights.clone();
        vars.remove(i);
        weights.remove(i);
        let mut s = MultiSeries {
            vars,
            weights,
            order: self.order,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest.remove(i);
            s.add_term(rest, c * num_traits::pow(value.clone(), k as usize));
        }
        Ok(s)
    }

    /// Same terms, truncated at a lower order.
    pub fn truncated(&self, order: u32) -> Self {
        let mut s = self.zero_like();
        s.order = order.min(self.order);
        for (e, c) in &self.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    /// Terms in display order: by weighted degree, then exponent vector.
    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            self.weight(a.0)
                .cmp(&self.weight(b.0))
                .then_with(|| a.0.cmp(b.0))
        });
        v
    }

    /// `coeff * x1^a1 ...`, one monomial per line.
    pub fn monomial_lines(&self) -> Vec<String> {
        self.sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(&self.vars)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, v)| {
                        if *k == 1 {
                            v.clone()
                        } else {
                            format!("{v}^{k}")
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c} * {}", mono.join(" "))
                }
            })
            .collect()
    }

    /// Machine-readable form: a `# vars` header, then one
    /// `<exponents> <rational>` line per term.
    pub fn dump(&self) -> String {
        let mut out = format!("# vars {}\n", self.vars.join(" "));
        for (e, c) in self.sorted_terms() {
            let exps: Vec<String> = e.iter().map(ToString::to_string).collect();
            out.push_str(&format!("{} {c}\n", exps.join(" ")));
        }
        out
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(&self.monomial_lines().join("\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn x(order: u32) -> MultiSeries {
        MultiSeries::zero(&[("x", 1)], order)
            .variable_like("x")
            .unwrap()
    }

    #[test]
    fn products() {
        let one = x(3).one_like();
        let a = one.add(&x(3)).unwrap();
        assert_eq!(a.mul(&one).unwrap(), a);
        let b = one.sub(&x(3)).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coefficient(&[0]), int(1));
        assert_eq!(p.coefficient(&[1]), int(0));
        assert_eq!(p.coefficient(&[2]), int(-1));

        let two = x(2);
        let q = two.one_like().add(&two).unwrap().add(&two.pow(2)).unwrap();
        let r = q.mul(&two.one_like().add(&two).unwrap()).unwrap();
        assert_eq!(r.to_string(), "1\n2 * x\n2 * x^2");
    }

    #[test]
    fn exponential_and_logarithm() {
        let e = x(3).exp().unwrap();
        assert_eq!(e.coefficient(&[3]), ratio(1, 6));
        assert_eq!(x(3).zero_like().exp().unwrap(), x(3).one_like());
        let l = x(3).one_like().add(&x(3)).unwrap().log().unwrap();
        assert_eq!(l.coefficient(&[2]), ratio(-1, 2));
        assert_eq!(l.coefficient(&[3]), ratio(1, 3));
        assert_eq!(l.exp().unwrap(), x(3).one_like().add(&x(3)).unwrap());
        assert!(x(3).one_like().exp().is_err());
        assert!(x(3).log().is_err());
    }

    #[test]
    fn weights_drive_truncation() {
        let s = MultiSeries::zero(&[("x2", 2), ("N", 0)], 4);
        let x2 = s.variable_like("x2").unwrap();
        assert!(x2.pow(3).is_zero());
        assert_eq!(x2.pow(2).coefficient(&[2, 0]), int(1));
        let n = s.variable_like("N").unwrap();
        assert!(n.exp().is_err());
    }

    #[test]
    fn mismatched_series_do_not_combine() {
        let a = MultiSeries::zero(&[("x", 1)], 3);
        let b = MultiSeries::zero(&[("y", 1)], 3);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&a.truncated(2)).is_err());
    }

    #[test]
    fn evaluation_drops_a_variable() {
        let s = MultiSeries::zero(&[("t", 1), ("N", 0)], 2);
        let mut p = s.zero_like();
        p.add_term(vec![1, 2], int(3));
        p.add_term(vec![1, 0], int(1));
        let at2 = p.evaluate_at("N", &int(2)).unwrap();
        assert_eq!(at2.vars(), ["t".to_string()]);
        assert_eq!(at2.coefficient(&[1]), int(13));
    }

    #[test]
    fn dump_format() {
        let s = x(2).one_like().add(&x(2).scale(&ratio(-1, 2))).unwrap();
        assert_eq!(s.dump(), "# vars x\n0 1\n1 -1/2\n");
    }
}
