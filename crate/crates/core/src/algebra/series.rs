//! Truncated multivariate formal series over cyclotomic rationals.
//!
//! Each variable carries its own exponent lattice (1/denom)*Z and a window
//! [min, max] of admitted exponents, both in *scaled* units (the integer
//! numerator over `denom`). Terms above a variable's `max` are discarded by
//! ring operations: that is the truncation. Terms that would fall *below* a
//! variable's `min` panic instead, because silently dropping low-order terms
//! of a Laurent variable would corrupt coefficients that are still in the
//! window. Callers therefore set `min` to a true lower bound (a valuation
//! they can justify) and `max` to the reporting cutoff plus enough headroom
//! to absorb negative exponents from other factors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};

use super::cyclotomic::Cyc;
use super::{rat, Rat};

/// Declaration of one formal variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    /// Exponent lattice is (1/denom)*Z; stored exponents are numerators.
    pub denom: i64,
    pub min: i64,
    pub max: i64,
}

/// An ordered set of variable declarations shared by a family of series.
#[derive(Debug, PartialEq, Eq, Default)]
pub struct VarSet {
    specs: Vec<VarSpec>,
}

impl VarSet {
    pub fn new() -> Self {
        VarSet { specs: Vec::new() }
    }

    /// Declare a variable; returns its index.
    pub fn add(&mut self, name: &str, denom: i64, min: i64, max: i64) -> usize {
        assert!(denom >= 1);
        assert!(min <= 0 && max >= 0, "window must contain exponent 0: {name}");
        assert!(
            self.specs.iter().all(|s| s.name != name),
            "duplicate variable {name}"
        );
        self.specs.push(VarSpec {
            name: name.to_string(),
            denom,
            min,
            max,
        });
        self.specs.len() - 1
    }

    /// Integer-lattice variable with window [0, max].
    pub fn add_simple(&mut self, name: &str, max: i64) -> usize {
        self.add(name, 1, 0, max)
    }

    pub fn freeze(self) -> Arc<VarSet> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn spec(&self, i: usize) -> &VarSpec {
        &self.specs[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.specs.iter().position(|s| s.name == name)
    }
}

type Exps = Vec<i64>;

/// A truncated formal series: finitely many terms, exponents in-window.
#[derive(Clone)]
pub struct Series {
    vars: Arc<VarSet>,
    terms: BTreeMap<Exps, Cyc>,
}

enum Admit {
    Keep,
    Truncate,
}

impl Series {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Series {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Series::scalar(vars, Cyc::one())
    }

    pub fn scalar(vars: &Arc<VarSet>, c: Cyc) -> Self {
        let mut s = Series::zero(vars);
        if !c.is_zero() {
            s.terms.insert(vec![0; vars.len()], c);
        }
        s
    }

    pub fn rational(vars: &Arc<VarSet>, r: Rat) -> Self {
        Series::scalar(vars, Cyc::from_rat(r))
    }

    /// c * var^(exp/denom); `exp` in scaled units.
    pub fn monomial(vars: &Arc<VarSet>, var: usize, exp: i64, c: Cyc) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[var] = exp;
        Series::term(vars, exps, c)
    }

    pub fn term(vars: &Arc<VarSet>, exps: Exps, c: Cyc) -> Self {
        let mut s = Series::zero(vars);
        s.insert(exps, c);
        s
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exps, &Cyc)> {
        self.terms.iter()
    }

    fn admit(&self, exps: &[i64]) -> Admit {
        for (i, &e) in exps.iter().enumerate() {
            let sp = self.vars.spec(i);
            if e > sp.max {
                return Admit::Truncate;
            }
            if e < sp.min {
                panic!(
                    "series exponent {} of variable {} fell below window minimum {}; widen the window",
                    e, sp.name, sp.min
                );
            }
        }
        Admit::Keep
    }

    fn insert(&mut self, exps: Exps, c: Cyc) {
        if c.is_zero() {
            return;
        }
        if let Admit::Truncate = self.admit(&exps) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn same_vars(&self, other: &Series) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "series over different variable sets"
        );
    }

    pub fn add(&self, other: &Series) -> Series {
        self.same_vars(other);
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        self.same_vars(other);
        let mut out = Series::zero(&self.vars);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let exps: Exps = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                // cheap window pre-check before the coefficient product
                if exps
                    .iter()
                    .enumerate()
                    .any(|(i, &e)| e > self.vars.spec(i).max)
                {
                    continue;
                }
                out.insert(exps, ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &Cyc) -> Series {
        if c.is_zero() {
            return Series::zero(&self.vars);
        }
        Series {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn mul_rat(&self, r: &Rat) -> Series {
        self.mul_scalar(&Cyc::from_rat(r.clone()))
    }

    /// Multiply by c * prod var_i^(delta_i); deltas in scaled units.
    pub fn mul_monomial(&self, c: &Cyc, deltas: &[(usize, i64)]) -> Series {
        let mut out = Series::zero(&self.vars);
        for (e, x) in self.terms.iter() {
            let mut exps = e.clone();
            for &(v, d) in deltas {
                exps[v] += d;
            }
            out.insert(exps, x.mul(c));
        }
        out
    }

    pub fn pow_u64(&self, n: u64) -> Series {
        let mut acc = Series::one(&self.vars);
        let mut sq = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    pub fn constant_term(&self) -> Cyc {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Cyc::zero)
    }

    fn without_constant(&self) -> Series {
        let mut s = self.clone();
        s.terms.remove(&vec![0; self.vars.len()]);
        s
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> crate::Result<Series> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(crate::Error::BadConstantTerm {
                expected: "0".into(),
                found: c0.to_string(),
            });
        }
        let mut acc = Series::one(&self.vars);
        let mut term = Series::one(&self.vars);
        let mut k: u64 = 1;
        loop {
            term = term.mul(self).mul_rat(&(rat(1) / rat(k as i64)));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
            k += 1;
            assert!(k < 100_000, "exp did not terminate; argument not nilpotent in window");
        }
        Ok(acc)
    }

    /// log of a series with constant term one.
    pub fn log(&self) -> crate::Result<Series> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(crate::Error::BadConstantTerm {
                expected: "1".into(),
                found: c0.to_string(),
            });
        }
        let x = self.without_constant();
        let mut acc = Series::zero(&self.vars);
        let mut pow = Series::one(&self.vars);
        let mut k: u64 = 1;
        loop {
            pow = pow.mul(&x);
            if pow.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pow.mul_rat(&(rat(sign) / rat(k as i64))));
            k += 1;
            assert!(k < 100_000, "log did not terminate; argument not nilpotent in window");
        }
        Ok(acc)
    }

    /// s^e for rational e, requiring constant term one.
    pub fn pow_rat(&self, e: &Rat) -> crate::Result<Series> {
        if e.is_zero() {
            return Ok(Series::one(&self.vars));
        }
        self.log()?.mul_rat(e).exp()
    }

    /// s^e where the exponent is itself a series, as exp(e * log s).
    pub fn pow_series(&self, e: &Series) -> crate::Result<Series> {
        self.log()?.mul(e).exp()
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn inv(&self) -> crate::Result<Series> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(crate::Error::BadConstantTerm {
                expected: "nonzero".into(),
                found: "0".into(),
            });
        }
        let unit = self.mul_scalar(&c0.inv());
        let inv_unit = unit.log()?.neg().exp()?;
        Ok(inv_unit.mul_scalar(&c0.inv()))
    }

    /// Formal partial derivative with respect to a variable.
    pub fn derivative(&self, var: usize) -> Series {
        let d = self.vars.spec(var).denom;
        let mut out = Series::zero(&self.vars);
        for (e, c) in self.terms.iter() {
            if e[var] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[var] -= d;
            out.insert(exps, c.scale(&(rat(e[var]) / rat(d))));
        }
        out
    }

    /// The coefficient series of var^(exp/denom): terms with that exact
    /// exponent, with the variable's exponent zeroed out.
    pub fn coeff_of(&self, var: usize, exp: i64) -> Series {
        let mut out = Series::zero(&self.vars);
        for (e, c) in self.terms.iter() {
            if e[var] == exp {
                let mut exps = e.clone();
                exps[var] = 0;
                out.insert(exps, c.clone());
            }
        }
        out
    }

    /// The coefficient of a full exponent vector (scaled units).
    pub fn coefficient(&self, exps: &[i64]) -> Cyc {
        self.terms.get(exps).cloned().unwrap_or_else(Cyc::zero)
    }

    /// Substitute var -> c * prod var_j^(d_j) (a monomial). The substituted
    /// variable must only occur with exponents divisible by its denom, and
    /// the deltas are per unit exponent, in the target's scaled units.
    pub fn subst_monomial(&self, var: usize, c: &Cyc, deltas: &[(usize, i64)]) -> Series {
        let d = self.vars.spec(var).denom;
        let mut out = Series::zero(&self.vars);
        for (e, x) in self.terms.iter() {
            assert!(
                e[var] % d == 0,
                "monomial substitution needs integral exponents of {}",
                self.vars.spec(var).name
            );
            let k = e[var] / d;
            let mut exps = e.clone();
            exps[var] = 0;
            for &(v, dv) in deltas {
                exps[v] += dv * k;
            }
            out.insert(exps, x.mul(&c.pow_i64(k)));
        }
        out
    }

    /// Evaluate one variable at a scalar.
    pub fn eval_var(&self, var: usize, value: &Cyc) -> Series {
        self.subst_monomial(var, value, &[])
    }

    /// Substitute var -> sum of c_j * var_j (a linear form in other
    /// variables). Exponents of `var` must be nonnegative integers.
    pub fn subst_linear(&self, var: usize, form: &[(Cyc, usize)]) -> Series {
        let d = self.vars.spec(var).denom;
        let linear = form.iter().fold(Series::zero(&self.vars), |acc, (c, v)| {
            acc.add(&Series::monomial(
                &self.vars,
                *v,
                self.vars.spec(*v).denom,
                c.clone(),
            ))
        });
        let mut powers: Vec<Series> = vec![Series::one(&self.vars)];
        let mut out = Series::zero(&self.vars);
        for (e, x) in self.terms.iter() {
            assert!(e[var] % d == 0 && e[var] >= 0, "linear substitution needs nonnegative integral exponents");
            let k = (e[var] / d) as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(&linear);
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[var] = 0;
            let base = Series::term(&self.vars, rest, x.clone());
            out = out.add(&base.mul(&powers[k]));
        }
        out
    }

    /// Map a series onto a larger variable set by variable name.
    pub fn embed(&self, target: &Arc<VarSet>) -> Series {
        let map: Vec<usize> = (0..self.vars.len())
            .map(|i| {
                target
                    .index(&self.vars.spec(i).name)
                    .unwrap_or_else(|| panic!("variable {} missing in target", self.vars.spec(i).name))
            })
            .collect();
        let mut out = Series::zero(target);
        for (e, c) in self.terms.iter() {
            let mut exps = vec![0; target.len()];
            for (i, &ei) in e.iter().enumerate() {
                let sp_from = self.vars.spec(i);
                let sp_to = target.spec(map[i]);
                assert!(sp_to.denom % sp_from.denom == 0, "incompatible lattices for {}", sp_from.name);
                exps[map[i]] = ei * (sp_to.denom / sp_from.denom);
            }
            out.insert(exps, c.clone());
        }
        out
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for Series {}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let sp = self.vars.spec(i);
                if sp.denom == 1 {
                    write!(f, "*{}^{}", sp.name, ei)?;
                } else {
                    let g = num_integer::gcd(ei.abs(), sp.denom);
                    let (n, d) = (ei / g, sp.denom / g);
                    if d == 1 {
                        write!(f, "*{}^{}", sp.name, n)?;
                    } else {
                        write!(f, "*{}^({}/{})", sp.name, n, d)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// sinh(v/2)/(v/2) as a power series in a single declared variable times a
/// scalar multiplier: S(c*v) truncated to the variable's window.
pub fn sfunc(vars: &Arc<VarSet>, var: usize, c: &Cyc) -> Series {
    // S(x) = sum_{k>=0} (x/2)^(2k) / (2k+1)!
    let sp = vars.spec(var);
    assert!(sp.denom == 1);
    let mut s = Series::zero(vars);
    let mut k = 0i64;
    loop {
        let e = 2 * k;
        if e > sp.max {
            break;
        }
        let coeff = super::factorial((2 * k + 1) as u64)
            .recip()
            * Rat::new(num_bigint::BigInt::from(1), num_bigint::BigInt::from(2).pow(2 * k as u32));
        s.insert_pub(vec_with(vars.len(), var, e), c.pow_i64(e).scale(&coeff));
        k += 1;
    }
    s
}

fn vec_with(n: usize, i: usize, v: i64) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = v;
    e
}

impl Series {
    pub(crate) fn insert_pub(&mut self, exps: Exps, c: Cyc) {
        self.insert(exps, c);
    }

    /// Drop every term whose exponent of `var` differs from zero; useful for
    /// windows used as scratch space.
    pub fn restrict_var_zero(&self, var: usize) -> Series {
        self.coeff_of(var, 0)
    }

    /// Largest exponent of `var` among the terms (scaled), if any term exists.
    pub fn max_exp(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Smallest exponent of `var` among the terms (scaled).
    pub fn min_exp(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// Sum of |numerator| + |denominator| digit sizes; a cheap size probe for
    /// diagnostics only.
    pub fn coeff_size_probe(&self) -> usize {
        self.terms
            .values()
            .map(|c| {
                c.coeffs()
                    .iter()
                    .map(|r| r.numer().abs().to_f64().map(|f| f.log10().max(0.0) as usize).unwrap_or(64))
                    .sum::<usize>()
            })
            .sum()
    }
}
