//! Exact multivariate Laurent polynomials over arbitrary-precision integers.
//!
//! Every generating function in this crate lives in this ring. Exponents may
//! be negative (Laurent), coefficients are exact `rug::Integer`s, and the
//! canonical term order for serialization and display is graded lex.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector, one entry per variable of the owning polynomial.
pub type Exps = SmallVec<[i32; 4]>;

/// Working precision (bits) for float evaluation; ~77 decimal digits.
pub const EVAL_PREC: u32 = 256;

#[derive(Clone, Default)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: FxHashMap<Exps, Integer>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        // Compare up to embedding into the union variable set.
        let vars = union_vars(&self.vars, &other.vars);
        self.embed(&vars).terms == other.embed(&vars).terms
    }
}
impl Eq for LaurentPoly {}

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut vars = a.to_vec();
    for v in b {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    vars.sort();
    vars
}

impl LaurentPoly {
    pub fn zero(vars: &[&str]) -> Self {
        Self {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: FxHashMap::default(),
        }
    }

    pub fn constant(vars: &[&str], c: impl Into<Integer>) -> Self {
        let mut p = Self::zero(vars);
        let c = c.into();
        if c != 0 {
            p.terms.insert(Self::zero_exps(p.vars.len()), c);
        }
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, 1)
    }

    /// The monomial `var^1` over the given variable set.
    pub fn var(vars: &[&str], name: &str) -> Self {
        Self::monomial(vars, name, 1, 1)
    }

    /// `c * name^e` over the given variable set.
    pub fn monomial(vars: &[&str], name: &str, e: i32, c: impl Into<Integer>) -> Self {
        let mut p = Self::zero(vars);
        let i = p
            .vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("variable {name} not in {:?}", p.vars));
        let c = c.into();
        if c != 0 {
            let mut exps = Self::zero_exps(p.vars.len());
            exps[i] = e;
            p.terms.insert(exps, c);
        }
        p
    }

    fn zero_exps(n: usize) -> Exps {
        SmallVec::from_elem(0, n)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Self::zero_exps(self.vars.len()))
                .is_some_and(|c| *c == 1)
    }

    pub fn coeff(&self, exps: &[i32]) -> Integer {
        self.terms
            .get(&Exps::from_slice(exps))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> Integer {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Sum of all coefficients, i.e. the value at (1, 1, ..., 1).
    pub fn at_ones(&self) -> Integer {
        let mut s = Integer::new();
        for c in self.terms.values() {
            s += c;
        }
        s
    }

    pub fn max_total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .unwrap_or(0)
    }

    /// (min, max) exponent of `var` over all terms; (0, 0) for the zero poly.
    pub fn var_degree_range(&self, var: &str) -> (i32, i32) {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return (0, 0);
        };
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for e in self.terms.keys() {
            lo = lo.min(e[i]);
            hi = hi.max(e[i]);
        }
        if lo > hi {
            (0, 0)
        } else {
            (lo, hi)
        }
    }

    pub fn has_negative_coeff(&self) -> bool {
        self.terms.values().any(|c| *c < 0)
    }

    fn insert_term(&mut self, exps: Exps, c: Integer) {
        if c == 0 {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable of `self`.
    pub fn embed(&self, vars: &[String]) -> Self {
        if self.vars == vars {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .unwrap_or_else(|| panic!("variable {v} missing from embedding target"))
            })
            .collect();
        let mut out = Self {
            vars: vars.to_vec(),
            terms: FxHashMap::with_capacity_and_hasher(self.terms.len(), Default::default()),
        };
        for (e, c) in &self.terms {
            let mut exps = Self::zero_exps(vars.len());
            for (i, &x) in e.iter().enumerate() {
                exps[map[i]] = x;
            }
            out.terms.insert(exps, c.clone());
        }
        out
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.vars == b.vars {
            (a.clone(), b.clone())
        } else {
            let vars = union_vars(&a.vars, &b.vars);
            (a.embed(&vars), b.embed(&vars))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::aligned(self, other);
        for (e, c) in b.terms {
            a.insert_term(e, c);
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (mut a, b) = Self::aligned(self, other);
        for (e, c) in b.terms {
            a.insert_term(e, -c);
        }
        a
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, k: impl Into<Integer>) -> Self {
        let k = k.into();
        if k == 0 {
            return Self {
                vars: self.vars.clone(),
                terms: FxHashMap::default(),
            };
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= &k;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        if a.terms.is_empty() || b.terms.is_empty() {
            return Self {
                vars: a.vars,
                terms: FxHashMap::default(),
            };
        }
        // Dense convolution fast path for univariate operands.
        if a.vars.len() == 1 && a.terms.len() > 8 && b.terms.len() > 8 {
            return Self::mul_dense_univar(&a, &b);
        }
        let mut out = Self {
            vars: a.vars.clone(),
            terms: FxHashMap::with_capacity_and_hasher(
                a.terms.len() + b.terms.len(),
                Default::default(),
            ),
        };
        // Iterate the smaller operand on the outside.
        let (outer, inner) = if a.terms.len() <= b.terms.len() {
            (&a, &b)
        } else {
            (&b, &a)
        };
        for (ea, ca) in &outer.terms {
            for (eb, cb) in &inner.terms {
                let mut e = ea.clone();
                for (i, x) in eb.iter().enumerate() {
                    e[i] += x;
                }
                let c = Integer::from(ca * cb);
                out.insert_term(e, c);
            }
        }
        out
    }

    fn mul_dense_univar(a: &Self, b: &Self) -> Self {
        let (alo, ahi) = a.var_degree_range(&a.vars[0]);
        let (blo, bhi) = b.var_degree_range(&b.vars[0]);
        let an = (ahi - alo + 1) as usize;
        let bn = (bhi - blo + 1) as usize;
        let mut av = vec![Integer::new(); an];
        for (e, c) in &a.terms {
            av[(e[0] - alo) as usize] = c.clone();
        }
        let mut bv = vec![Integer::new(); bn];
        for (e, c) in &b.terms {
            bv[(e[0] - blo) as usize] = c.clone();
        }
        let mut rv = vec![Integer::new(); an + bn - 1];
        for (i, ai) in av.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in bv.iter().enumerate() {
                if *bj == 0 {
                    continue;
                }
                rv[i + j] += ai * bj;
            }
        }
        let mut out = Self {
            vars: a.vars.clone(),
            terms: FxHashMap::with_capacity_and_hasher(rv.len(), Default::default()),
        };
        let off = alo + blo;
        for (i, c) in rv.into_iter().enumerate() {
            if c != 0 {
                out.terms.insert(SmallVec::from_slice(&[off + i as i32]), c);
            }
        }
        out
    }

    /// `self^k` by repeated squaring. Negative `k` is only defined for
    /// single-term monomials with unit coefficient.
    pub fn pow(&self, k: i32) -> Result<Self> {
        if k < 0 {
            if self.terms.len() != 1 {
                return Err(Error::NegativePower);
            }
            let (e, c) = self.terms.iter().next().unwrap();
            if *c != 1 && *c != -1 {
                return Err(Error::NegativePower);
            }
            let mut inv = Self {
                vars: self.vars.clone(),
                terms: FxHashMap::default(),
            };
            inv.terms.insert(e.iter().map(|&x| -x).collect(), c.clone());
            return inv.pow(-k);
        }
        let mut acc = Self::one_like(&self.vars);
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    fn one_like(vars: &[String]) -> Self {
        let mut p = Self {
            vars: vars.to_vec(),
            terms: FxHashMap::default(),
        };
        p.terms
            .insert(Self::zero_exps(vars.len()), Integer::from(1));
        p
    }

    /// Replaces `var` by the polynomial `q`. Negative exponents of `var`
    /// require `q` to be an invertible monomial.
    pub fn substitute(&self, var: &str, q: &Self) -> Result<Self> {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return Err(Error::Substitution(format!(
                "variable {var} not present in {:?}",
                self.vars
            )));
        };
        let rest_vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let mut target = union_vars(&rest_vars, &q.vars);
        if target.is_empty() {
            target = q.vars.clone();
        }
        // Group terms by the exponent of `var`.
        let mut groups: BTreeMap<i32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i];
            let g = groups.entry(k).or_insert_with(|| Self {
                vars: target.clone(),
                terms: FxHashMap::default(),
            });
            let mut exps = Self::zero_exps(target.len());
            for (j, &x) in e.iter().enumerate() {
                if j == i {
                    continue;
                }
                let pos = target.iter().position(|v| v == &self.vars[j]).unwrap();
                exps[pos] = x;
            }
            g.insert_term(exps, c.clone());
        }
        let q = q.embed(&target);
        let mut out = Self {
            vars: target.clone(),
            terms: FxHashMap::default(),
        };
        for (k, g) in groups {
            let qk = q.pow(k)?;
            out = out.add(&g.mul(&qk));
        }
        Ok(out)
    }

    /// Sets `var := 1`, dropping the variable's exponents but keeping it in
    /// the variable list (handy for marginals where other labels are frozen).
    pub fn substitute_one(&self, var: &str) -> Result<Self> {
        self.substitute(var, &Self::one_like(&self.vars).embed_self())
    }

    fn embed_self(self) -> Self {
        self
    }

    /// Exact evaluation at rational points. Every variable must be assigned.
    pub fn eval_rational(&self, assignment: &BTreeMap<String, Rational>) -> Result<Rational> {
        for v in &self.vars {
            if !assignment.contains_key(v) {
                return Err(Error::Substitution(format!("variable {v} unassigned")));
            }
        }
        let mut total = Rational::new();
        for (e, c) in &self.terms {
            let mut t = Rational::from(c);
            for (i, &k) in e.iter().enumerate() {
                let r = &assignment[&self.vars[i]];
                t *= rational_pow(r, k, &self.vars[i])?;
            }
            total += t;
        }
        Ok(total)
    }

    /// High-precision float evaluation (at least `prec` bits; pass
    /// [`EVAL_PREC`] for the crate default of ~77 decimal digits).
    pub fn eval_float(&self, assignment: &BTreeMap<String, Float>, prec: u32) -> Result<Float> {
        for v in &self.vars {
            if !assignment.contains_key(v) {
                return Err(Error::Substitution(format!("variable {v} unassigned")));
            }
        }
        let mut total = Float::with_val(prec, 0);
        for (e, c) in &self.terms {
            let mut t = Float::with_val(prec, c);
            for (i, &k) in e.iter().enumerate() {
                let x = &assignment[&self.vars[i]];
                if x.is_zero() && k < 0 {
                    return Err(Error::Pole {
                        var: self.vars[i].clone(),
                    });
                }
                t *= Float::with_val(prec, x.pow(k));
            }
            total += t;
        }
        Ok(total)
    }

    /// Multiplies by `var^delta`.
    pub fn shift_var(&self, var: &str, delta: i32) -> Self {
        let i = self.vars.iter().position(|v| v == var).expect("shift var");
        let mut out = Self {
            vars: self.vars.clone(),
            terms: FxHashMap::with_capacity_and_hasher(self.terms.len(), Default::default()),
        };
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] += delta;
            out.terms.insert(e, c.clone());
        }
        out
    }

    /// Exponent reversal `p(var) -> var^top * p(1/var)`.
    pub fn reverse_var(&self, var: &str, top: i32) -> Self {
        let i = self
            .vars
            .iter()
            .position(|v| v == var)
            .expect("reverse var");
        let mut out = Self {
            vars: self.vars.clone(),
            terms: FxHashMap::with_capacity_and_hasher(self.terms.len(), Default::default()),
        };
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] = top - e[i];
            out.terms.insert(e, c.clone());
        }
        out
    }

    /// Halves every exponent of `var` (used to return from u back to z = u^2).
    /// Fails if any exponent is odd.
    pub fn halve_var_exponents(&self, var: &str, renamed: &str) -> Result<Self> {
        let i = self.vars.iter().position(|v| v == var).expect("halve var");
        let mut vars = self.vars.clone();
        vars[i] = renamed.to_string();
        let mut out = Self {
            vars,
            terms: FxHashMap::with_capacity_and_hasher(self.terms.len(), Default::default()),
        };
        for (e, c) in &self.terms {
            if e[i] % 2 != 0 {
                return Err(Error::OddExponent {
                    var: var.to_string(),
                });
            }
            let mut e = e.clone();
            e[i] /= 2;
            out.terms.insert(e, c.clone());
        }
        Ok(out)
    }

    pub fn rename_var(&self, from: &str, to: &str) -> Self {
        let mut out = self.clone();
        let i = out.vars.iter().position(|v| v == from).expect("rename var");
        out.vars[i] = to.to_string();
        out
    }

    /// Divides every coefficient exactly by `d`, erroring if any coefficient
    /// is not divisible.
    pub fn div_exact(&self, d: &Integer) -> Result<Self> {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            if !c.is_divisible(d) {
                return Err(Error::Substitution(format!(
                    "coefficient {c} not divisible by {d}"
                )));
            }
            *c = c.clone() / d;
        }
        Ok(out)
    }

    /// Terms in canonical graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(Exps, Integer)> {
        let mut ts: Vec<(Exps, Integer)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        ts.sort_by(|(a, _), (b, _)| {
            let da: i64 = a.iter().map(|&x| x as i64).sum();
            let db: i64 = b.iter().map(|&x| x as i64).sum();
            da.cmp(&db).then_with(|| a.cmp(b))
        });
        ts
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                serde_json::json!({
                    "coef": c.to_string(),
                    "exps": e.to_vec(),
                })
            })
            .collect();
        serde_json::json!({ "vars": self.vars, "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let vars = v["vars"]
            .as_array()
            .ok_or_else(|| Error::Json("missing vars".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Json("var not a string".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = Self {
            vars,
            terms: FxHashMap::default(),
        };
        for t in v["terms"]
            .as_array()
            .ok_or_else(|| Error::Json("missing terms".into()))?
        {
            let c: Integer = t["coef"]
                .as_str()
                .ok_or_else(|| Error::Json("coef not a string".into()))?
                .parse()
                .map_err(|e| Error::Json(format!("bad coefficient: {e}")))?;
            let exps: Exps = t["exps"]
                .as_array()
                .ok_or_else(|| Error::Json("missing exps".into()))?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .map(|k| k as i32)
                        .ok_or_else(|| Error::Json("exp not an integer".into()))
                })
                .collect::<Result<Exps>>()?;
            if exps.len() != p.vars.len() {
                return Err(Error::Json("exponent arity mismatch".into()));
            }
            p.insert_term(exps, c);
        }
        Ok(p)
    }

    /// Exact moment statistics of the coefficient distribution along `var`,
    /// all other variables frozen at 1. Coefficients act as unnormalized
    /// probability weights.
    pub fn log_derivative_stats(&self, var: &str) -> Result<MomentStats> {
        if self.has_negative_coeff() {
            return Err(Error::MixedSigns);
        }
        let i = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::Substitution(format!("variable {var} not present")))?;
        // Collapse to weights per var-exponent.
        let mut weights: BTreeMap<i32, Integer> = BTreeMap::new();
        for (e, c) in &self.terms {
            *weights.entry(e[i]).or_default() += c;
        }
        let total: Integer = weights.values().cloned().sum();
        if total <= 0 {
            return Err(Error::MixedSigns);
        }
        // Factorial moments F_r = p^(r)(1)/p(1), r = 1..4.
        let mut fact = [
            Rational::new(),
            Rational::new(),
            Rational::new(),
            Rational::new(),
        ];
        for (&k, w) in &weights {
            let k = Integer::from(k);
            let mut falling = Integer::from(1);
            for (r, f) in fact.iter_mut().enumerate() {
                falling *= Integer::from(&k - r as i64);
                *f += Rational::from((Integer::from(&falling * w), total.clone()));
            }
        }
        let [f1, f2, f3, f4] = fact;
        // Raw moments via Stirling numbers of the second kind.
        let m1 = f1.clone();
        let m2 = f2.clone() + &f1;
        let m3 = f3.clone() + Rational::from((3, 1)) * &f2 + &f1;
        let m4 = f4 + Rational::from((6, 1)) * &f3 + Rational::from((7, 1)) * &f2 + &f1;
        // Central cumulants.
        let mean = m1.clone();
        let variance = m2.clone() - Rational::from(&m1 * &m1);
        let k3 = m3.clone() - Rational::from((3, 1)) * Rational::from(&m1 * &m2)
            + Rational::from((2, 1)) * rational_cube(&m1);
        let k4 = m4
            - Rational::from((4, 1)) * Rational::from(&m1 * &m3)
            - Rational::from((3, 1)) * Rational::from(&m2 * &m2)
            + Rational::from((12, 1)) * (&m2 * Rational::from(&m1 * &m1))
            - Rational::from((6, 1)) * rational_fourth(&m1);
        Ok(MomentStats {
            mean,
            variance,
            k3,
            k4,
        })
    }
}

fn rational_cube(r: &Rational) -> Rational {
    r * Rational::from(r * r)
}

fn rational_fourth(r: &Rational) -> Rational {
    let sq = Rational::from(r * r);
    Rational::from(&sq * &sq)
}

pub fn rational_pow(r: &Rational, k: i32, var: &str) -> Result<Rational> {
    if k >= 0 {
        Ok(Rational::from(r.pow(k as u32)))
    } else {
        if *r == 0 {
            return Err(Error::Pole {
                var: var.to_string(),
            });
        }
        Ok(Rational::from(r.pow(k)))
    }
}

/// Mean, variance and higher cumulants of a label-count distribution,
/// all exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentStats {
    pub mean: Rational,
    pub variance: Rational,
    pub k3: Rational,
    pub k4: Rational,
}

impl MomentStats {
    /// kappa_3 / sigma^3 at float precision; `None` when the variance is 0.
    pub fn standardized_skew(&self, prec: u32) -> Option<Float> {
        if self.variance == 0 {
            return None;
        }
        let v = Float::with_val(prec, &self.variance);
        let s3 = v.sqrt() * Float::with_val(prec, &self.variance);
        Some(Float::with_val(prec, &self.k3) / s3)
    }

    /// kappa_4 / sigma^4 at float precision; `None` when the variance is 0.
    pub fn standardized_excess(&self, prec: u32) -> Option<Float> {
        if self.variance == 0 {
            return None;
        }
        let v2 = Rational::from(&self.variance * &self.variance);
        Some(Float::with_val(prec, &self.k4) / Float::with_val(prec, &v2))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            let neg = c < 0;
            let abs = c.clone().abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], k)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]", self)
    }
}

/// Parse helper for tests and the CLI: builds `(1 + c*x^k...)`-style products
/// is intentionally absent; construct polynomials with the combinators above.
#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> LaurentPoly {
        LaurentPoly::var(&["z"], "z")
    }

    fn one_z() -> LaurentPoly {
        LaurentPoly::one(&["z"])
    }

    #[test]
    fn square_of_one_plus_z2() {
        let p = one_z().add(&z().pow(2).unwrap());
        let sq = p.pow(2).unwrap();
        let mut expect = LaurentPoly::one(&["z"]);
        expect = expect.add(&LaurentPoly::monomial(&["z"], "z", 2, 2));
        expect = expect.add(&LaurentPoly::monomial(&["z"], "z", 4, 1));
        assert_eq!(sq, expect);
    }

    #[test]
    fn hanoi_psi2_hand_expansion() {
        // ((z+1)/z)^2 - 3(z+1)/z + 4 == (2z^2 - z + 1)/z^2
        let psi1 = z()
            .add(&one_z())
            .mul(&LaurentPoly::monomial(&["z"], "z", -1, 1));
        let psi2 = psi1
            .pow(2)
            .unwrap()
            .sub(&psi1.scale(3))
            .add(&LaurentPoly::constant(&["z"], 4));
        let expect = LaurentPoly::monomial(&["z"], "z", 0, 2)
            .add(&LaurentPoly::monomial(&["z"], "z", -1, -1))
            .add(&LaurentPoly::monomial(&["z"], "z", -2, 1));
        assert_eq!(psi2, expect);
    }

    #[test]
    fn mul_by_one_is_identity() {
        let p = z().pow(3).unwrap().add(&one_z().scale(7)).sub(&z());
        assert_eq!(p.mul(&one_z()), p);
    }

    #[test]
    fn substitute_scalar_one() {
        let p = one_z().add(&z().pow(2).unwrap());
        let mut asn = BTreeMap::new();
        asn.insert("z".to_string(), Rational::from(1));
        assert_eq!(p.eval_rational(&asn).unwrap(), Rational::from(2));
    }

    #[test]
    fn pole_detection() {
        let p = LaurentPoly::monomial(&["z"], "z", -1, 1);
        let mut asn = BTreeMap::new();
        asn.insert("z".to_string(), Rational::from(0));
        assert!(matches!(p.eval_rational(&asn), Err(Error::Pole { .. })));
    }

    #[test]
    fn negative_pow_of_non_monomial_rejected() {
        let p = one_z().add(&z());
        assert!(matches!(p.pow(-1), Err(Error::NegativePower)));
    }

    #[test]
    fn float_eval_simple() {
        let p = one_z().add(&z().pow(2).unwrap());
        let mut asn = BTreeMap::new();
        asn.insert("z".to_string(), Float::with_val(EVAL_PREC, 0.5));
        let v = p.eval_float(&asn, EVAL_PREC).unwrap();
        assert!((v - Float::with_val(EVAL_PREC, 1.25)).abs() < 1e-70);
    }

    #[test]
    fn binomial_stats() {
        // (1+b)^10: mean 5, variance 10/4, kappa3 = 0, kappa4 = -10/8.
        let b = LaurentPoly::var(&["b"], "b");
        let p = LaurentPoly::one(&["b"]).add(&b).pow(10).unwrap();
        let st = p.log_derivative_stats("b").unwrap();
        assert_eq!(st.mean, Rational::from(5));
        assert_eq!(st.variance, Rational::from((10, 4)));
        assert_eq!(st.k3, Rational::from(0));
        assert_eq!(st.k4, Rational::from((-10, 8)));
    }

    #[test]
    fn mixed_sign_stats_rejected() {
        let p = one_z().sub(&z());
        assert!(matches!(
            p.log_derivative_stats("z"),
            Err(Error::MixedSigns)
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = LaurentPoly::monomial(&["y"], "y", -3, 2)
            .add(&LaurentPoly::monomial(&["y"], "y", 5, -7))
            .add(&LaurentPoly::one(&["y"]));
        let q = LaurentPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn halve_exponents_checks_parity() {
        let p = LaurentPoly::monomial(&["u"], "u", 4, 3);
        let h = p.halve_var_exponents("u", "z").unwrap();
        assert_eq!(h, LaurentPoly::monomial(&["z"], "z", 2, 3));
        let odd = LaurentPoly::monomial(&["u"], "u", 3, 1);
        assert!(odd.halve_var_exponents("u", "z").is_err());
    }
}
