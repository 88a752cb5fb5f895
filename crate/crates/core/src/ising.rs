//! Ising-model assembly on top of the generating functions: exact partition
//! functions in y = exp(beta J), free-energy densities, thermodynamic limits
//! with auditable tail bounds, the renormalization flow, and per-label
//! statistics with normality diagnostics.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::genfun::{self, GfLabeling, PsiVariant};
use crate::graph::{self, LabeledMultigraph};
use crate::group::Family;
use crate::poly::{LaurentPoly, MomentStats};

/// Default numeric precision (bits); ~115 decimal digits so the 1e-9 and
/// 1e-10 acceptance tolerances are never limited by rounding.
pub const PREC: u32 = 384;

/// Inverse temperature and coupling(s); beta*J is the only knob that enters.
#[derive(Clone, Debug)]
pub struct IsingParams {
    pub beta: f64,
    pub couplings: Couplings,
}

#[derive(Clone, Debug)]
pub enum Couplings {
    Uniform(f64),
    PerLabel(BTreeMap<char, f64>),
}

impl IsingParams {
    pub fn uniform(beta: f64, j: f64) -> Self {
        IsingParams {
            beta,
            couplings: Couplings::Uniform(j),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "beta must be nonnegative, got {}",
                self.beta
            )));
        }
        let js: Vec<f64> = match &self.couplings {
            Couplings::Uniform(j) => vec![*j],
            Couplings::PerLabel(m) => m.values().copied().collect(),
        };
        if js.is_empty() {
            return Err(Error::InvalidParams(
                "at least one coupling required".into(),
            ));
        }
        if js.iter().any(|j| !j.is_finite() || *j < 0.0) {
            return Err(Error::InvalidParams(
                "couplings must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }

    pub fn j_for(&self, label: char) -> Result<f64> {
        match &self.couplings {
            Couplings::Uniform(j) => Ok(*j),
            Couplings::PerLabel(m) => m.get(&label).copied().ok_or_else(|| {
                Error::InvalidParams(format!("no coupling given for label {label}"))
            }),
        }
    }

    /// z = tanh(beta J) for the given label.
    pub fn z_for(&self, label: char, prec: u32) -> Result<Float> {
        let j = self.j_for(label)?;
        Ok((Float::with_val(prec, self.beta) * Float::with_val(prec, j)).tanh())
    }

    pub fn z_uniform(&self, prec: u32) -> Result<Float> {
        match &self.couplings {
            Couplings::Uniform(j) => {
                Ok((Float::with_val(prec, self.beta) * Float::with_val(prec, *j)).tanh())
            }
            Couplings::PerLabel(_) => Err(Error::InvalidParams(
                "uniform z requested but couplings are per-label".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Exact partition functions
// ---------------------------------------------------------------------------

/// Refuses weighted ternary generating-function requests whose trivariate
/// expansion is outside any reasonable budget (term counts grow like the
/// cube of the polygon degree).
pub fn guard_weighted_ternary(family: Family, n: u32, labeling: GfLabeling) -> Result<()> {
    let ternary = matches!(family, Family::Hanoi | Family::Sierpinski);
    if ternary && labeling != GfLabeling::Unweighted && n > 4 {
        return Err(Error::BudgetExceeded {
            what: "weighted ternary generating-function level",
            required: n as u64,
            budget: 4,
        });
    }
    Ok(())
}

/// Builds the graph and matching generating function for a (family, level,
/// labeling) request. Edge and vertex counts always come from the
/// constructed graph.
pub fn graph_and_gamma(
    family: Family,
    n: u32,
    labeling: GfLabeling,
) -> Result<(LabeledMultigraph, LaurentPoly)> {
    guard_weighted_ternary(family, n, labeling)?;
    let g = match (family, labeling) {
        (Family::Sierpinski, GfLabeling::RotationInvariant) => {
            graph::build_rotation_invariant_omega(n)?
        }
        (Family::Sierpinski, _) => {
            graph::contract_to_sierpinski(&graph::build_schreier(Family::Hanoi, n)?)?
        }
        (_, GfLabeling::RotationInvariant) => {
            return Err(Error::InvalidParams(format!(
                "rotation-invariant labeling exists only for sierpinski, not {family}"
            )))
        }
        _ => graph::build_schreier(family, n)?,
    };
    let gamma = match (family, labeling) {
        (Family::Grigorchuk, GfLabeling::Unweighted) => genfun::grigorchuk_gamma(n, false)?.gamma,
        (Family::Grigorchuk, GfLabeling::SchreierLabels) => {
            genfun::grigorchuk_gamma(n, true)?.gamma
        }
        (Family::Basilica, GfLabeling::Unweighted) => genfun::basilica_gamma(n, false)?.gamma,
        (Family::Basilica, GfLabeling::SchreierLabels) => genfun::basilica_gamma(n, true)?.gamma,
        (Family::Hanoi, GfLabeling::Unweighted) => genfun::hanoi_gamma_recursive(n)?.gamma,
        (Family::Hanoi, GfLabeling::SchreierLabels) => genfun::hanoi_gamma_weighted(n)?.gamma,
        (Family::Sierpinski, GfLabeling::Unweighted) => {
            genfun::sierpinski_gamma_recursive(n)?.gamma
        }
        (Family::Sierpinski, GfLabeling::SchreierLabels) => {
            genfun::sierpinski_schreier_weighted(n)?.gamma
        }
        (Family::Sierpinski, GfLabeling::RotationInvariant) => {
            genfun::sierpinski_gamma_rotation_invariant(n)?.gamma
        }
        (_, GfLabeling::RotationInvariant) => unreachable!(),
    };
    Ok((g, gamma))
}

/// Exact partition function as a Laurent polynomial: in y = exp(beta J) for
/// the unweighted labeling, or in one y_<label> per edge label otherwise.
///
/// Uses cosh(bJ) = (y^2+1)/(2y) and tanh(bJ) = (y^2-1)/(y^2+1) to clear the
/// high-temperature expansion into the integer Laurent ring.
pub fn partition_function_exact(
    family: Family,
    n: u32,
    labeling: GfLabeling,
) -> Result<LaurentPoly> {
    let (g, gamma) = graph_and_gamma(family, n, labeling)?;
    let v = g.vertex_count() as u32;

    // Per-variable edge counts and the label -> y-variable map.
    let (gamma_vars, y_vars, e_counts): (Vec<String>, Vec<String>, Vec<i32>) = match labeling {
        GfLabeling::Unweighted => (
            vec!["z".to_string()],
            vec!["y".to_string()],
            vec![g.loopless_edge_count() as i32],
        ),
        _ => {
            let counts = g.label_edge_counts();
            // Include every gamma variable, even labels absent from polygons.
            let mut vars: Vec<String> = gamma.vars().to_vec();
            vars.sort();
            let y_vars = vars.iter().map(|l| format!("y_{l}")).collect();
            let es = vars
                .iter()
                .map(|l| {
                    let c = l.chars().next().unwrap();
                    counts.get(&c).copied().unwrap_or(0) as i32
                })
                .collect();
            (vars, y_vars, es)
        }
    };
    let y_refs: Vec<&str> = y_vars.iter().map(|s| s.as_str()).collect();

    // Power tables per variable: minus[k] = (y^2-1)^k, plus[j] = (y^2+1)^j.
    let gamma = gamma.embed(&gamma_vars);
    let mut minus_pows: Vec<Vec<LaurentPoly>> = Vec::new();
    let mut plus_pows: Vec<Vec<LaurentPoly>> = Vec::new();
    for (vi, yv) in y_refs.iter().enumerate() {
        let y2 = LaurentPoly::monomial(&y_refs, yv, 2, 1);
        let minus = y2.sub(&LaurentPoly::one(&y_refs));
        let plus = y2.add(&LaurentPoly::one(&y_refs));
        let (_, max_m) = gamma.var_degree_range(&gamma_vars[vi]);
        let mut mp = vec![LaurentPoly::one(&y_refs)];
        for k in 1..=max_m.max(0) {
            mp.push(mp[(k - 1) as usize].mul(&minus));
        }
        let mut pp = vec![LaurentPoly::one(&y_refs)];
        for j in 1..=e_counts[vi] {
            pp.push(pp[(j - 1) as usize].mul(&plus));
        }
        minus_pows.push(mp);
        plus_pows.push(pp);
    }

    let mut sum = LaurentPoly::zero(&y_refs);
    for (exps, coef) in gamma.sorted_terms() {
        let mut term = LaurentPoly::constant(&y_refs, coef);
        for (vi, &m) in exps.iter().enumerate() {
            if m < 0 || m > e_counts[vi] {
                return Err(Error::Domain(format!(
                    "gamma exponent {m} outside [0, E={}] for {}",
                    e_counts[vi], gamma_vars[vi]
                )));
            }
            term = term
                .mul(&minus_pows[vi][m as usize])
                .mul(&plus_pows[vi][(e_counts[vi] - m) as usize]);
        }
        sum = sum.add(&term);
    }

    // Z = sum * 2^(V - E_total) * prod y^(-E).
    let e_total: i32 = e_counts.iter().sum();
    let mut z = if v as i32 >= e_total {
        sum.scale(Integer::from(1) << (v - e_total as u32))
    } else {
        sum.div_exact(&(Integer::from(1) << (e_total as u32 - v)))?
    };
    for (vi, yv) in y_refs.iter().enumerate() {
        z = z.shift_var(yv, -e_counts[vi]);
    }
    Ok(z)
}

// ---------------------------------------------------------------------------
// Log-space evaluation of the closed forms
// ---------------------------------------------------------------------------

/// log psi_k for k = 1..=depth, computed in log space so the doubly
/// exponential growth of the tower never overflows.
fn psi_log_tower(variant: PsiVariant, z: &Float, depth: u32, prec: u32) -> Vec<Float> {
    let lz = Float::with_val(prec, z.ln_ref());
    let mut ms: Vec<Float> = Vec::with_capacity(depth as usize);
    for k in 1..=depth {
        let m = match (variant, k) {
            (PsiVariant::Hanoi, 1) => {
                // psi_1 = (z+1)/z
                Float::with_val(prec, 1 + z).ln() - &lz
            }
            (PsiVariant::Sierpinski, 1) => {
                // psi_1 = (z+1)/sqrt(z)
                Float::with_val(prec, 1 + z).ln() - Float::with_val(prec, &lz / 2u32)
            }
            (PsiVariant::Sierpinski, 2) => {
                // psi_2 = (z^2+1)/z
                Float::with_val(prec, z.square_ref()).ln_1p() - &lz
            }
            _ => {
                let prev = &ms[(k - 2) as usize];
                let u = Float::with_val(prec, -prev).exp();
                let arg = Float::with_val(prec, &u * &u) * 4u32 - Float::with_val(prec, &u) * 3u32;
                Float::with_val(prec, 2 * prev) + arg.ln_1p()
            }
        };
        ms.push(m);
    }
    ms
}

/// log Gamma_n(z) for the Hanoi or Sierpinski family, via the psi tower.
/// Requires 0 < z <= 1.
fn tower_log_gamma(variant: PsiVariant, n: u32, z: &Float, prec: u32) -> Float {
    let ms = psi_log_tower(variant, z, n + 1, prec);
    let lz = Float::with_val(prec, z.ln_ref());
    let three_n = Float::with_val(prec, Integer::from(3).pow(n));
    let mut acc = match variant {
        PsiVariant::Hanoi => three_n * &lz,
        PsiVariant::Sierpinski => three_n * &lz / 2u32,
    };
    for k in 1..=n {
        let w = Float::with_val(prec, Integer::from(3).pow(n - k));
        acc += w * &ms[(k - 1) as usize];
    }
    // log(psi_{n+1} - 1) = m + log(1 - exp(-m)); psi >= 2 on (0, 1].
    let m = &ms[n as usize];
    let one_minus = -Float::with_val(prec, -m).exp();
    acc += Float::with_val(prec, m) + one_minus.ln_1p();
    acc
}

/// log Gamma_n(z) for any family from the closed product forms, never
/// expanding polynomials. z in [0, 1).
fn log_gamma(family: Family, n: u32, z: &Float, prec: u32) -> Result<Float> {
    if z.is_zero() {
        return Ok(Float::with_val(prec, 0));
    }
    match family {
        Family::Grigorchuk => {
            let z2 = Float::with_val(prec, z.square_ref());
            let e = (Integer::from(1) << (n - 1)) - 1;
            Ok(Float::with_val(prec, e) * z2.ln_1p())
        }
        Family::Basilica => {
            let mut acc = Float::with_val(prec, 0);
            for (_, len, mult) in genfun::basilica_cycle_factors(n) {
                let zp = Float::with_val(prec, z.pow(len));
                acc += Float::with_val(prec, mult) * zp.ln_1p();
            }
            Ok(acc)
        }
        Family::Hanoi => Ok(tower_log_gamma(PsiVariant::Hanoi, n, z, prec)),
        Family::Sierpinski => Ok(tower_log_gamma(PsiVariant::Sierpinski, n, z, prec)),
    }
}

/// log Z_n at z = tanh(beta J) from the closed forms:
/// log Z = V log 2 + E log cosh + log Gamma(z).
pub fn log_partition(family: Family, n: u32, z: &Float, prec: u32) -> Result<Float> {
    if !(z.is_zero() || (z.is_sign_positive() && *z <= 1)) {
        return Err(Error::Domain(format!("z = {z} outside [0, 1]")));
    }
    let v = Float::with_val(prec, graph::vertex_count_formula(family, n)?);
    let e = Float::with_val(prec, graph::loopless_edge_count_formula(family, n)?);
    // cosh(atanh z) = 1/sqrt(1-z^2)
    let log_cosh = -Float::with_val(prec, 1 - Float::with_val(prec, z.square_ref())).ln() / 2u32;
    let l2 = Float::with_val(prec, 2).ln();
    Ok(v * l2 + e * log_cosh + log_gamma(family, n, z, prec)?)
}

/// Free-energy density log(Z_n)/|V_n| from the product closed forms.
pub fn free_energy_density(family: Family, n: u32, z: &Float, prec: u32) -> Result<Float> {
    let v = Float::with_val(prec, graph::vertex_count_formula(family, n)?);
    Ok(log_partition(family, n, z, prec)? / v)
}

// ---------------------------------------------------------------------------
// Thermodynamic limits
// ---------------------------------------------------------------------------

/// A truncated limit series with its tail bound, so tolerance claims are
/// auditable: |value - value_with_more_terms| <= tail_bound.
#[derive(Clone, Debug)]
pub struct LimitSeries {
    pub family: Family,
    pub value: Float,
    /// Per-term contributions actually summed (after the closed prefix).
    pub terms: Vec<Float>,
    pub truncation_index: u32,
    pub tail_bound: Float,
}

/// lim log(Z_n)/|V_n| with truncation error at most `tol`.
///
/// Grigorchuk: exact closed expression. Basilica: geometric tail bound.
/// Hanoi/Sierpinski: the tower bound |log phi_k| <= 2^k log 2.
pub fn thermodynamic_limit(family: Family, z: &Float, tol: f64, prec: u32) -> Result<LimitSeries> {
    if !(z.is_zero() || z.is_sign_positive()) || *z >= 1 {
        if *z >= 1 {
            return Err(Error::ZeroTemperature);
        }
        return Err(Error::Domain(format!("z = {z} outside [0, 1)")));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidParams("tolerance must be positive".into()));
    }
    let l2 = Float::with_val(prec, 2).ln();
    let log_cosh = -Float::with_val(prec, 1 - Float::with_val(prec, z.square_ref())).ln() / 2u32;

    match family {
        Family::Grigorchuk => {
            let z2 = Float::with_val(prec, z.square_ref());
            let value = Float::with_val(prec, 1.5) * &log_cosh + &l2 + z2.ln_1p() / 2u32;
            Ok(LimitSeries {
                family,
                value: value.clone(),
                terms: vec![value],
                truncation_index: 0,
                tail_bound: Float::with_val(prec, 0),
            })
        }
        Family::Basilica => {
            let mut value = Float::with_val(prec, &l2) + Float::with_val(prec, 1.5) * &log_cosh;
            let mut terms = Vec::new();
            let mut k = 0u32;
            let tail = loop {
                k += 1;
                // term_k = (3/2) 4^-k log(1 + z^(2^k))
                let zp = pow_2k(z, k, prec);
                let term = Float::with_val(prec, 1.5) * zp.ln_1p()
                    / Float::with_val(prec, Integer::from(1) << (2 * k));
                value += &term;
                terms.push(term);
                // Bound: terms are decreasing in k; sum_{j>k} (3/2) 4^-j log(1+z^(2^(k+1)))
                let next = pow_2k(z, k + 1, prec).ln_1p();
                let bound = Float::with_val(prec, 0.5) * next
                    / Float::with_val(prec, Integer::from(1) << (2 * k));
                if bound < tol || k > 64 {
                    break bound;
                }
            };
            Ok(LimitSeries {
                family,
                value,
                terms,
                truncation_index: k,
                tail_bound: tail,
            })
        }
        Family::Hanoi | Family::Sierpinski => {
            let variant = match family {
                Family::Hanoi => PsiVariant::Hanoi,
                _ => PsiVariant::Sierpinski,
            };
            // value = log2 + cE log cosh + w * sum_k 3^-k log phi_k, where
            // log phi_k = m_k + 2^(k-1) log u, u = z (hanoi) or sqrt(z).
            let (ce, w) = match variant {
                PsiVariant::Hanoi => (Float::with_val(prec, 1.5), 1u32),
                PsiVariant::Sierpinski => (Float::with_val(prec, 2), 2u32),
            };
            let mut value = Float::with_val(prec, &l2) + ce * &log_cosh;
            let mut terms = Vec::new();
            if z.is_zero() {
                return Ok(LimitSeries {
                    family,
                    value,
                    terms,
                    truncation_index: 0,
                    tail_bound: Float::with_val(prec, 0),
                });
            }
            let log2 = Float::with_val(prec, 2).ln();
            // Depth from the bound: w * 3 log2 * (2/3)^(K+1) <= tol.
            let mut depth = 2u32;
            loop {
                let b = tower_tail_bound(w, depth, prec, &log2);
                if b < tol || depth > 120 {
                    break;
                }
                depth += 1;
            }
            let ms = psi_log_tower(variant, z, depth, prec);
            let lu = match variant {
                PsiVariant::Hanoi => Float::with_val(prec, z.ln_ref()),
                PsiVariant::Sierpinski => Float::with_val(prec, z.ln_ref()) / 2u32,
            };
            for (k, m) in ms.iter().enumerate() {
                let k1 = k as u32 + 1;
                let log_phi =
                    Float::with_val(prec, m) + Float::with_val(prec, Integer::from(1) << k) * &lu;
                let term = Float::with_val(prec, w) * log_phi
                    / Float::with_val(prec, Integer::from(3).pow(k1));
                value += &term;
                terms.push(term);
            }
            let tail = tower_tail_bound(w, depth, prec, &log2);
            Ok(LimitSeries {
                family,
                value,
                terms,
                truncation_index: depth,
                tail_bound: tail,
            })
        }
    }
}

fn tower_tail_bound(w: u32, after: u32, prec: u32, log2: &Float) -> Float {
    // w * log2 * sum_{k > after} (2/3)^k = w * log2 * 3 (2/3)^(after+1)
    let ratio = Float::with_val(prec, 2) / 3u32;
    Float::with_val(prec, w * 3) * log2 * ratio.pow(after + 1)
}

fn pow_2k(z: &Float, k: u32, prec: u32) -> Float {
    let mut w = Float::with_val(prec, z);
    for _ in 0..k {
        w.square_mut();
    }
    w
}

// ---------------------------------------------------------------------------
// Renormalization
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenormVariant {
    Sierpinski,
    Hanoi,
}

impl RenormVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sierpinski" => Ok(RenormVariant::Sierpinski),
            "hanoi" => Ok(RenormVariant::Hanoi),
            _ => Err(Error::InvalidParams(format!("unknown variant {s}"))),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            RenormVariant::Sierpinski => Family::Sierpinski,
            RenormVariant::Hanoi => Family::Hanoi,
        }
    }
}

/// One renormalization step: the coupling map f(y) and the prefactor c(y).
pub fn renormalization_step(variant: RenormVariant, y: &Float) -> Result<(Float, Float)> {
    let prec = y.prec().max(PREC);
    if !(y.is_sign_positive() && !y.is_zero()) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    let y2 = Float::with_val(prec, y.square_ref());
    let y3 = Float::with_val(prec, &y2 * y);
    let y4 = Float::with_val(prec, y2.square_ref());
    let y6 = Float::with_val(prec, &y4 * &y2);
    let y8 = Float::with_val(prec, y4.square_ref());
    match variant {
        RenormVariant::Sierpinski => {
            // f = ((y^8 - y^4 + 4)/(y^4 + 3))^(1/4)
            // c = (y^4 + 1)/y^3 * ((y^4 + 3)^3 (y^8 - y^4 + 4))^(1/4)
            let num = y8.clone() - &y4 + 4u32;
            let den = y4.clone() + 3u32;
            let f = Float::with_val(prec, &num / &den).root(4);
            let den3 = Float::with_val(prec, den.square_ref()) * &den;
            let c = (y4.clone() + 1u32) / &y3 * (den3 * &num).root(4);
            Ok((f, c))
        }
        RenormVariant::Hanoi => {
            // f = ((y^8 - 2y^6 + 2y^4 + 2y^2 + 1)/(2(y^4 + 1)))^(1/4)
            // c = (y^4 - y^2 + 2)(y^2 + 1)^3 / y^6
            //     * (8 (y^4 + 1)^3 (y^8 - 2y^6 + 2y^4 + 2y^2 + 1))^(1/4)
            let num = y8.clone() - Float::with_val(prec, &y6 * 2u32)
                + Float::with_val(prec, &y4 * 2u32)
                + Float::with_val(prec, &y2 * 2u32)
                + 1u32;
            let den = (y4.clone() + 1u32) * 2u32;
            let f = Float::with_val(prec, &num / &den).root(4);
            let p = y2.clone() + 1u32;
            let p3 = Float::with_val(prec, p.square_ref()) * &p;
            let q = y4.clone() + 1u32;
            let q3 = Float::with_val(prec, q.square_ref()) * &q;
            let c = (y4.clone() - &y2 + 2u32) * p3 / &y6 * (q3 * &num * 8u32).root(4);
            Ok((f, c))
        }
    }
}

/// log Z_n(y) for the renormalization families, via z = (y^2-1)/(y^2+1).
pub fn renorm_log_partition(variant: RenormVariant, n: u32, y: &Float) -> Result<Float> {
    let prec = y.prec().max(PREC);
    if !(y.is_sign_positive() && !y.is_zero()) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    let y2 = Float::with_val(prec, y.square_ref());
    let z = Float::with_val(prec, &y2 - 1u32) / Float::with_val(prec, &y2 + 1u32);
    log_partition(variant.family(), n, &z, prec)
}

/// Relative defect |Z_{n+1}(y) / (Z_n(f(y)) c(y)^(3^(n-1))) - 1|.
pub fn renorm_identity_defect(variant: RenormVariant, n: u32, y: &Float) -> Result<Float> {
    let prec = y.prec().max(PREC);
    let (f, c) = renormalization_step(variant, y)?;
    let lhs = renorm_log_partition(variant, n + 1, y)?;
    let rhs = renorm_log_partition(variant, n, &f)?
        + Float::with_val(prec, Integer::from(3).pow(n - 1)) * c.ln();
    Ok(Float::with_val(prec, &lhs - &rhs).exp_m1().abs())
}

// ---------------------------------------------------------------------------
// Label statistics
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct LabelStats {
    pub label: char,
    pub stats: MomentStats,
    pub std_skew: Option<Float>,
    pub std_excess: Option<Float>,
}

/// Exact per-label count statistics of a random closed polygon, from the
/// single-label marginals of the weighted generating functions.
pub fn label_statistics(family: Family, n: u32, labeling: GfLabeling) -> Result<Vec<LabelStats>> {
    let labels: Vec<char> = match family {
        Family::Grigorchuk => vec!['a', 'b', 'c', 'd'],
        Family::Basilica => vec!['a', 'b'],
        Family::Hanoi | Family::Sierpinski => vec!['a', 'b', 'c'],
    };
    let mut out = Vec::new();
    for label in labels {
        let marginal: LaurentPoly = match (family, labeling) {
            (Family::Grigorchuk, GfLabeling::SchreierLabels) => {
                genfun::grigorchuk_marginal(n, label)?
            }
            (Family::Basilica, GfLabeling::SchreierLabels) => genfun::basilica_marginal(n, label)?,
            (Family::Hanoi, GfLabeling::SchreierLabels) => {
                genfun::hanoi_weighted_marginal(n, label)?
            }
            (Family::Sierpinski, GfLabeling::SchreierLabels) => {
                genfun::sierpinski_schreier_marginal(n, label)?
            }
            (Family::Sierpinski, GfLabeling::RotationInvariant) => {
                genfun::sierpinski_rotation_marginal(n, label)?
            }
            _ => {
                return Err(Error::InvalidParams(format!(
                    "no weighted generating function for {family} with {} labeling",
                    labeling.as_str()
                )))
            }
        };
        let var = label.to_string();
        let stats = if marginal.vars().contains(&var) {
            marginal.log_derivative_stats(&var)?
        } else {
            // Label never appears (e.g. grigorchuk a): degenerate at 0.
            MomentStats {
                mean: Rational::new(),
                variance: Rational::new(),
                k3: Rational::new(),
                k4: Rational::new(),
            }
        };
        out.push(LabelStats {
            label,
            std_skew: stats.standardized_skew(PREC),
            std_excess: stats.standardized_excess(PREC),
            stats,
        });
    }
    Ok(out)
}

/// Fixed 20-significant-digit scientific rendering (rug counts significant
/// digits, not fraction digits). Zero renders as a full-width constant so
/// columns stay aligned and byte-stable.
pub fn sci20(x: &Float) -> String {
    if x.is_zero() {
        return "0.0000000000000000000e0".to_string();
    }
    format!("{x:.20e}")
}

/// CSV with exact-rational columns as "p/q" and numeric columns in fixed
/// 20-digit scientific notation.
pub fn stats_csv(family: Family, n: u32, labeling: GfLabeling, rows: &[LabelStats]) -> String {
    let mut out = String::from(
        "family,level,labeling,label,mean,variance,kappa3,kappa4,std_skew,std_excess\n",
    );
    for r in rows {
        let skew = r
            .std_skew
            .as_ref()
            .map(sci20)
            .unwrap_or_else(|| "NA".into());
        let excess = r
            .std_excess
            .as_ref()
            .map(sci20)
            .unwrap_or_else(|| "NA".into());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            family.name(),
            n,
            labeling.as_str(),
            r.label,
            r.stats.mean,
            r.stats.variance,
            r.stats.k3,
            r.stats.k4,
            skew,
            excess,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn yp(pairs: &[(i32, i64)]) -> LaurentPoly {
        pairs
            .iter()
            .fold(LaurentPoly::zero(&["y"]), |acc, &(e, c)| {
                acc.add(&LaurentPoly::monomial(&["y"], "y", e, c))
            })
    }

    #[test]
    fn grigorchuk_level1_partition() {
        // Z = 4 cosh(bJ) = 2y + 2/y
        let z = partition_function_exact(Family::Grigorchuk, 1, GfLabeling::Unweighted).unwrap();
        assert_eq!(z, yp(&[(1, 2), (-1, 2)]));
    }

    #[test]
    fn hanoi_level1_partition_seed() {
        let z = partition_function_exact(Family::Hanoi, 1, GfLabeling::Unweighted).unwrap();
        assert_eq!(z, yp(&[(3, 2), (-1, 6)]));
        let s = partition_function_exact(Family::Sierpinski, 1, GfLabeling::Unweighted).unwrap();
        assert_eq!(s, yp(&[(3, 2), (-1, 6)]));
    }

    #[test]
    fn partition_matches_spin_sum_small() {
        for (family, n) in [
            (Family::Grigorchuk, 2u32),
            (Family::Basilica, 2),
            (Family::Hanoi, 2),
        ] {
            let z = partition_function_exact(family, n, GfLabeling::Unweighted).unwrap();
            let g = graph::build_schreier(family, n).unwrap();
            let s = oracle::spin_sum_partition(&g, oracle::SpinWeighting::Uniform, 20).unwrap();
            assert_eq!(z, s, "{family} level {n}");
        }
    }

    #[test]
    fn grigorchuk_symbolic_partition_formula() {
        // Z_n = 2^(2^n) cosh^(3 2^(n-1) - 2) (1 + tanh^2)^(2^(n-1)-1), cleared
        // into y: checked against the direct assembly for n <= 6.
        for n in 1..=6u32 {
            let z =
                partition_function_exact(Family::Grigorchuk, n, GfLabeling::Unweighted).unwrap();
            let e = 3 * (1i32 << (n - 1)) - 2;
            let v = 1u32 << n;
            let y2 = LaurentPoly::monomial(&["y"], "y", 2, 1);
            let one = LaurentPoly::one(&["y"]);
            let plus = y2.add(&one);
            let minus = y2.sub(&one);
            // (y^2+1)^E + expansion of (1+tanh^2)^(2^(n-1)-1) cleared:
            // sum_k C(m, k) (y^2-1)^(2k) (y^2+1)^(E-2k), m = 2^(n-1)-1.
            let m = (1i32 << (n - 1)) - 1;
            let mut sum = LaurentPoly::zero(&["y"]);
            let mut binom = Integer::from(1);
            for k in 0..=m {
                let t = minus
                    .pow(2 * k)
                    .unwrap()
                    .mul(&plus.pow(e - 2 * k).unwrap())
                    .scale(binom.clone());
                sum = sum.add(&t);
                binom = binom * (m - k) / (k + 1);
            }
            let expect = if v as i32 >= e {
                sum.scale(Integer::from(1) << (v - e as u32))
            } else {
                sum.div_exact(&(Integer::from(1) << (e as u32 - v)))
                    .unwrap()
            }
            .shift_var("y", -e);
            assert_eq!(z, expect, "level {n}");
        }
    }

    #[test]
    fn free_energy_basilica_zero_temperature_is_log2() {
        let z = Float::with_val(PREC, 0);
        let d = free_energy_density(Family::Basilica, 6, &z, PREC).unwrap();
        let l2 = Float::with_val(PREC, 2).ln();
        assert!(Float::with_val(PREC, &d - &l2).abs() < 1e-90);
    }

    #[test]
    fn log_partition_matches_exact_poly() {
        // Evaluate the exact Laurent Z at y = e^(bJ) and compare with the
        // closed-form log evaluation.
        for (family, n) in [
            (Family::Grigorchuk, 3u32),
            (Family::Basilica, 4),
            (Family::Hanoi, 2),
            (Family::Sierpinski, 2),
        ] {
            let zpoly = partition_function_exact(family, n, GfLabeling::Unweighted).unwrap();
            let bj = Float::with_val(PREC, 0.37);
            let y = bj.clone().exp();
            let mut asn = BTreeMap::new();
            asn.insert("y".to_string(), y.clone());
            let direct = zpoly.eval_float(&asn, PREC).unwrap().ln();
            let z = bj.tanh();
            let via_log = log_partition(family, n, &z, PREC).unwrap();
            let diff = Float::with_val(PREC, &direct - &via_log).abs();
            assert!(diff < 1e-80, "{family} level {n}: diff {diff}");
        }
    }

    #[test]
    fn density_converges_to_limit() {
        for family in [Family::Grigorchuk, Family::Basilica, Family::Hanoi] {
            let z = Float::with_val(PREC, 0.5);
            let lim = thermodynamic_limit(family, &z, 1e-12, PREC).unwrap();
            let d1 = free_energy_density(family, 10, &z, PREC).unwrap();
            let d2 = free_energy_density(family, 14, &z, PREC).unwrap();
            let e1 = Float::with_val(PREC, &d1 - &lim.value).abs();
            let e2 = Float::with_val(PREC, &d2 - &lim.value).abs();
            assert!(e2 < e1, "{family}: {e2} !< {e1}");
        }
    }

    #[test]
    fn density_differences_decay_geometrically() {
        // |d_{n+1} - d_n| shrinks with ratio <= 0.9 for n >= 4.
        for family in [
            Family::Grigorchuk,
            Family::Basilica,
            Family::Hanoi,
            Family::Sierpinski,
        ] {
            for zv in [0.1f64, 0.5, 0.9] {
                let z = Float::with_val(PREC, zv);
                let densities: Vec<Float> = (4..=10)
                    .map(|n| free_energy_density(family, n, &z, PREC).unwrap())
                    .collect();
                let diffs: Vec<Float> = densities
                    .windows(2)
                    .map(|w| Float::with_val(PREC, &w[1] - &w[0]).abs())
                    .collect();
                for w in diffs.windows(2) {
                    let bound = Float::with_val(PREC, &w[0] * 0.9f64);
                    assert!(
                        w[1] <= bound,
                        "{family} z={zv}: ratio {} above 0.9",
                        Float::with_val(PREC, &w[1] / &w[0])
                    );
                }
            }
        }
    }

    #[test]
    fn limit_series_bound_is_honest() {
        for family in [Family::Basilica, Family::Hanoi, Family::Sierpinski] {
            let z = Float::with_val(PREC, 0.9);
            let coarse = thermodynamic_limit(family, &z, 1e-6, PREC).unwrap();
            let fine = thermodynamic_limit(family, &z, 1e-14, PREC).unwrap();
            let diff = Float::with_val(PREC, &coarse.value - &fine.value).abs();
            assert!(
                diff <= coarse.tail_bound,
                "{family}: diff {diff} > bound {}",
                coarse.tail_bound
            );
        }
    }

    #[test]
    fn grigorchuk_limit_at_infinite_temperature_is_log2() {
        let z = Float::with_val(PREC, 0);
        let lim = thermodynamic_limit(Family::Grigorchuk, &z, 1e-10, PREC).unwrap();
        let l2 = Float::with_val(PREC, 2).ln();
        assert!(Float::with_val(PREC, &lim.value - &l2).abs() < 1e-90);
    }

    #[test]
    fn basilica_series_matches_density_at_level_24() {
        let z = Float::with_val(PREC, 0.5);
        let series = thermodynamic_limit(Family::Basilica, &z, 1e-10, PREC).unwrap();
        let density = free_energy_density(Family::Basilica, 24, &z, PREC).unwrap();
        let err = Float::with_val(PREC, &series.value - &density).abs();
        assert!(err < 1e-8, "err {err}");
    }

    #[test]
    fn zero_temperature_refused() {
        let z = Float::with_val(PREC, 1);
        assert!(matches!(
            thermodynamic_limit(Family::Hanoi, &z, 1e-8, PREC),
            Err(Error::ZeroTemperature)
        ));
    }

    #[test]
    fn renorm_fixed_point_at_y1() {
        let y = Float::with_val(PREC, 1);
        let (f, c) = renormalization_step(RenormVariant::Sierpinski, &y).unwrap();
        assert!(Float::with_val(PREC, &f - 1u32).abs() < 1e-90);
        assert!(Float::with_val(PREC, &c - 8u32).abs() < 1e-90);
    }

    #[test]
    fn renorm_identity_small() {
        for variant in [RenormVariant::Sierpinski, RenormVariant::Hanoi] {
            let y = Float::with_val(PREC, 2);
            let defect = renorm_identity_defect(variant, 1, &y).unwrap();
            assert!(defect < 1e-9, "{variant:?}: defect {defect}");
        }
    }

    #[test]
    fn renorm_rejects_nonpositive_y() {
        let y = Float::with_val(PREC, 0);
        assert!(renormalization_step(RenormVariant::Hanoi, &y).is_err());
    }

    #[test]
    fn hanoi_tower_shift_recurrence_is_exact() {
        // The single-power recurrence closes for the Sierpinski graphs but
        // not for the Hanoi Schreier graphs: their edge count (3^(n+1)-3)/2
        // is not homogeneous in 3^n, which leaves an n-independent boundary
        // factor d(y). The exact statement, verified here to full precision:
        //
        //   Z_{n+1}(y) = Z_n(y') * ctilde(y)^(3^n) * d(y)
        //
        // with psi_1 = (1+z)/z, z' = 1/(psi_1^2 - 3 psi_1 + 3),
        // ctilde = 4 cosh(bJ)^(9/2) cosh(b'J)^(-3/2) z^3 psi_1 / z',
        // d = (cosh(b'J)/cosh(bJ))^(3/2), z = tanh(bJ), z' = tanh(b'J).
        let log_cosh = |z: &Float| -> Float {
            -Float::with_val(PREC, 1 - Float::with_val(PREC, z.square_ref())).ln() / 2u32
        };
        for yv in [1.1f64, 2.0, 3.0] {
            let y = Float::with_val(PREC, yv);
            let y2 = Float::with_val(PREC, y.square_ref());
            let z = Float::with_val(PREC, &y2 - 1u32) / Float::with_val(PREC, &y2 + 1u32);
            let psi1 = Float::with_val(PREC, 1 + &z) / &z;
            let q = Float::with_val(PREC, psi1.square_ref()) - Float::with_val(PREC, &psi1 * 3u32)
                + 4u32;
            let zp = Float::with_val(PREC, 1u32) / (q - 1u32);
            let log_ctilde = Float::with_val(PREC, 2 * Float::with_val(PREC, 2).ln())
                + Float::with_val(PREC, 4.5) * log_cosh(&z)
                - Float::with_val(PREC, 1.5) * log_cosh(&zp)
                + Float::with_val(PREC, z.ln_ref()) * 3u32
                + psi1.clone().ln()
                - Float::with_val(PREC, zp.ln_ref());
            let log_d = Float::with_val(PREC, 1.5) * (log_cosh(&zp) - log_cosh(&z));
            for n in 1..=6u32 {
                let lhs = log_partition(Family::Hanoi, n + 1, &z, PREC).unwrap();
                let rhs = log_partition(Family::Hanoi, n, &zp, PREC).unwrap()
                    + Float::with_val(PREC, 3u64.pow(n)) * &log_ctilde
                    + &log_d;
                let defect = Float::with_val(PREC, &lhs - &rhs).abs();
                assert!(defect < 1e-100, "y={yv} n={n}: defect {defect}");
            }
        }
    }

    #[test]
    fn grigorchuk_stats_level3() {
        let rows = label_statistics(Family::Grigorchuk, 3, GfLabeling::SchreierLabels).unwrap();
        let b = rows.iter().find(|r| r.label == 'b').unwrap();
        assert_eq!(b.stats.mean, Rational::from((3, 2)));
        assert_eq!(b.stats.variance, Rational::from((3, 4)));
        let a = rows.iter().find(|r| r.label == 'a').unwrap();
        assert_eq!(a.stats.mean, Rational::from(0));
    }

    #[test]
    fn hanoi_stats_level2() {
        let rows = label_statistics(Family::Hanoi, 2, GfLabeling::SchreierLabels).unwrap();
        for r in &rows {
            assert_eq!(r.stats.mean, Rational::from(2), "label {}", r.label);
            assert_eq!(r.stats.variance, Rational::from(1));
        }
    }

    #[test]
    fn sierpinski_stats_level3() {
        for labeling in [GfLabeling::SchreierLabels, GfLabeling::RotationInvariant] {
            let rows = label_statistics(Family::Sierpinski, 3, labeling).unwrap();
            let c = rows.iter().find(|r| r.label == 'c').unwrap();
            assert_eq!(c.stats.mean, Rational::from((9, 2)));
            assert_eq!(c.stats.variance, Rational::from((9, 4)));
        }
    }

    #[test]
    fn csv_rendering() {
        let rows = label_statistics(Family::Hanoi, 2, GfLabeling::SchreierLabels).unwrap();
        let csv = stats_csv(Family::Hanoi, 2, GfLabeling::SchreierLabels, &rows);
        assert!(csv.starts_with("family,level"));
        assert!(csv.contains("hanoi,2,schreier-labels,a,2,1,0,"));
    }

    #[test]
    fn params_validation() {
        assert!(IsingParams::uniform(-1.0, 1.0).validate().is_err());
        assert!(IsingParams::uniform(1.0, 1.0).validate().is_ok());
        let p = IsingParams {
            beta: 1.0,
            couplings: Couplings::PerLabel(BTreeMap::new()),
        };
        assert!(p.validate().is_err());
    }
}
