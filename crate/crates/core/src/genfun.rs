//! Closed-polygon generating functions for every family: closed forms,
//! recursions, and weighted (labeled) versions, all as exact polynomials.
//!
//! The recursions are the authoritative computation; the closed forms are
//! verification paths. Both stay in the polynomial ring (no division): the
//! psi towers are carried by their polynomial numerators.

use std::collections::BTreeMap;

use rug::Integer;

use crate::error::{Error, Result};
use crate::group::Family;
use crate::poly::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfLabeling {
    Unweighted,
    SchreierLabels,
    RotationInvariant,
}

impl GfLabeling {
    pub fn as_str(&self) -> &'static str {
        match self {
            GfLabeling::Unweighted => "unweighted",
            GfLabeling::SchreierLabels => "schreier-labels",
            GfLabeling::RotationInvariant => "rotation-invariant",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "plain" | "unweighted" => Ok(GfLabeling::Unweighted),
            "labels" | "schreier-labels" => Ok(GfLabeling::SchreierLabels),
            "rotation" | "rotation-invariant" => Ok(GfLabeling::RotationInvariant),
            _ => Err(Error::InvalidParams(format!("unknown labeling {s}"))),
        }
    }
}

/// The generating-function state of a family at one level: Gamma plus the
/// auxiliary Upsilon functions its recursion carries.
#[derive(Clone, Debug)]
pub struct GenFunSet {
    pub family: Family,
    pub level: u32,
    pub labeling: GfLabeling,
    pub gamma: LaurentPoly,
    pub aux: BTreeMap<String, LaurentPoly>,
}

impl GenFunSet {
    pub fn gamma_at_ones(&self) -> Integer {
        self.gamma.at_ones()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let aux: serde_json::Map<String, serde_json::Value> = self
            .aux
            .iter()
            .map(|(k, p)| (k.clone(), p.to_json()))
            .collect();
        serde_json::json!({
            "family": self.family.name(),
            "level": self.level,
            "labeling": self.labeling.as_str(),
            "gamma-degree": self.gamma.max_total_degree(),
            "gamma-at-1": self.gamma_at_ones().to_string(),
            "gamma": self.gamma.to_json(),
            "aux": aux,
        })
    }
}

fn check_level(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::UnsupportedLevel {
            level: n,
            reason: format!("level must be at least {min}"),
        });
    }
    Ok(())
}

fn one_plus_var_pow(vars: &[&str], name: &str, k: i32) -> LaurentPoly {
    LaurentPoly::one(vars).add(&LaurentPoly::monomial(vars, name, k, 1))
}

// ---------------------------------------------------------------------------
// Grigorchuk
// ---------------------------------------------------------------------------

/// 2-cycle pair counts (X_n, Y_n, W_n) for the label pairs (b,c), (b,d),
/// (c,d), from the mod-3 closed formulas.
pub fn grigorchuk_xyw(n: u32) -> (u64, u64, u64) {
    let p = |e: u32| 1u64 << e;
    let x = match n % 3 {
        0 => (p(n + 1) - 2) / 7,
        1 => (p(n + 1) - 4) / 7,
        _ => (p(n + 1) - 1) / 7,
    };
    let y = match n % 3 {
        0 => (p(n) - 1) / 7,
        1 => (p(n) - 2) / 7,
        _ => (p(n) - 4) / 7,
    };
    let w = match n % 3 {
        0 => (p(n - 1) - 4) / 7,
        1 => (p(n - 1) - 1) / 7,
        _ => (p(n - 1) - 2) / 7,
    };
    (x, y, w)
}

/// Same counts by the coupled recursion X_n = W_{n-1} + 2^(n-2),
/// Y_n = X_{n-1}, W_n = Y_{n-1} from (0, 0, 0) at level 1.
pub fn grigorchuk_xyw_recursive(n: u32) -> (u64, u64, u64) {
    let (mut x, mut y, mut w) = (0u64, 0u64, 0u64);
    for m in 2..=n {
        let nx = w + (1u64 << (m - 2));
        let nw = y;
        y = x;
        x = nx;
        w = nw;
    }
    (x, y, w)
}

pub fn grigorchuk_gamma(n: u32, weighted: bool) -> Result<GenFunSet> {
    check_level(n, 1)?;
    let gamma = if weighted {
        let vars = ["a", "b", "c", "d"];
        let (x, y, w) = grigorchuk_xyw(n);
        let bc = LaurentPoly::one(&vars)
            .add(&LaurentPoly::var(&vars, "b").mul(&LaurentPoly::var(&vars, "c")));
        let bd = LaurentPoly::one(&vars)
            .add(&LaurentPoly::var(&vars, "b").mul(&LaurentPoly::var(&vars, "d")));
        let cd = LaurentPoly::one(&vars)
            .add(&LaurentPoly::var(&vars, "c").mul(&LaurentPoly::var(&vars, "d")));
        bc.pow(x as i32)?
            .mul(&bd.pow(y as i32)?)
            .mul(&cd.pow(w as i32)?)
    } else {
        one_plus_var_pow(&["z"], "z", 2).pow((1i32 << (n - 1)) - 1)?
    };
    Ok(GenFunSet {
        family: Family::Grigorchuk,
        level: n,
        labeling: if weighted {
            GfLabeling::SchreierLabels
        } else {
            GfLabeling::Unweighted
        },
        gamma,
        aux: BTreeMap::new(),
    })
}

/// Single-label restriction of the weighted Grigorchuk Gamma, computed from
/// the product form without expanding the other labels.
pub fn grigorchuk_marginal(n: u32, label: char) -> Result<LaurentPoly> {
    check_level(n, 1)?;
    let (x, y, w) = grigorchuk_xyw(n);
    let name = label.to_string();
    let vars = [name.as_str()];
    let two = |e: u64| -> Result<LaurentPoly> {
        Ok(LaurentPoly::constant(&vars, Integer::from(1) << (e as u32)))
    };
    let lin = one_plus_var_pow(&vars, &name, 1);
    match label {
        'a' => two(x + y + w),
        'b' => Ok(lin.pow((x + y) as i32)?.mul(&two(w)?)),
        'c' => Ok(lin.pow((x + w) as i32)?.mul(&two(y)?)),
        'd' => Ok(lin.pow((y + w) as i32)?.mul(&two(x)?)),
        _ => Err(Error::InvalidParams(format!(
            "grigorchuk has labels a, b, c, d; got {label}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Basilica
// ---------------------------------------------------------------------------

/// Cycle factor list (label, length, multiplicity) of the Basilica Sigma_n.
/// Levels 1..=3 are the explicit small graphs; levels >= 4 follow the parity
/// case split of the cycle census.
pub(crate) fn basilica_cycle_factors(n: u32) -> Vec<(char, u32, u32)> {
    match n {
        1 => vec![('b', 2, 1)],
        2 => vec![('a', 2, 1), ('b', 2, 2)],
        3 => vec![('a', 2, 2), ('b', 2, 2), ('b', 4, 1)],
        _ => {
            let mut fs = Vec::new();
            let half = n / 2;
            if n.is_multiple_of(2) {
                for k in 1..half {
                    fs.push(('a', 1 << k, 1 << (n - 2 * k - 1)));
                    fs.push(('b', 1 << k, 1 << (n - 2 * k)));
                }
                fs.push(('a', 1 << half, 1));
                fs.push(('b', 1 << half, 2));
            } else {
                let m = (n - 1) / 2;
                for k in 1..m {
                    fs.push(('a', 1 << k, 1 << (n - 2 * k - 1)));
                    fs.push(('b', 1 << k, 1 << (n - 2 * k)));
                }
                fs.push(('a', 1 << m, 2));
                fs.push(('b', 1 << m, 2));
                fs.push(('b', 1 << (m + 1), 1));
            }
            fs
        }
    }
}

pub fn basilica_gamma(n: u32, weighted: bool) -> Result<GenFunSet> {
    check_level(n, 1)?;
    let factors = basilica_cycle_factors(n);
    let gamma = if weighted {
        let vars = ["a", "b"];
        let mut g = LaurentPoly::one(&vars);
        for (label, len, mult) in &factors {
            let f = one_plus_var_pow(&vars, &label.to_string(), *len as i32);
            g = g.mul(&f.pow(*mult as i32)?);
        }
        g
    } else {
        let mut g = LaurentPoly::one(&["z"]);
        for (_, len, mult) in &factors {
            let f = one_plus_var_pow(&["z"], "z", *len as i32);
            g = g.mul(&f.pow(*mult as i32)?);
        }
        g
    };
    Ok(GenFunSet {
        family: Family::Basilica,
        level: n,
        labeling: if weighted {
            GfLabeling::SchreierLabels
        } else {
            GfLabeling::Unweighted
        },
        gamma,
        aux: BTreeMap::new(),
    })
}

pub fn basilica_marginal(n: u32, label: char) -> Result<LaurentPoly> {
    if label != 'a' && label != 'b' {
        return Err(Error::InvalidParams(format!(
            "basilica has labels a, b; got {label}"
        )));
    }
    let name = label.to_string();
    let vars = [name.as_str()];
    let mut g = LaurentPoly::one(&vars);
    for (l, len, mult) in basilica_cycle_factors(n) {
        if l == label {
            g = g.mul(&one_plus_var_pow(&vars, &name, len as i32).pow(mult as i32)?);
        } else {
            g = g.scale(Integer::from(1) << mult);
        }
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// Psi towers (Hanoi and Sierpinski)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiVariant {
    Hanoi,
    Sierpinski,
}

/// The quadratic tower psi_k = psi_{k-1}^2 - 3 psi_{k-1} + 4, carried by its
/// polynomial numerators: psi_k = phi_k / v^(2^(k-1)) with v = z for the
/// Hanoi tower and v = u (z = u^2) for the Sierpinski one.
#[derive(Clone, Debug)]
pub struct PsiTower {
    pub variant: PsiVariant,
    /// phis[k-1] is phi_k, k = 1..=depth.
    pub phis: Vec<LaurentPoly>,
}

impl PsiTower {
    pub fn new(variant: PsiVariant, depth: u32) -> Self {
        let var = match variant {
            PsiVariant::Hanoi => "z",
            PsiVariant::Sierpinski => "u",
        };
        let vars = [var];
        let mut phis: Vec<LaurentPoly> = Vec::with_capacity(depth as usize);
        for k in 1..=depth {
            let phi = match (variant, k) {
                (PsiVariant::Hanoi, 1) => one_plus_var_pow(&vars, var, 1),
                (PsiVariant::Sierpinski, 1) => one_plus_var_pow(&vars, var, 2),
                (PsiVariant::Sierpinski, 2) => one_plus_var_pow(&vars, var, 4),
                _ => {
                    let prev = &phis[(k - 2) as usize];
                    let half = LaurentPoly::monomial(&vars, var, 1 << (k - 2), 1);
                    let full = LaurentPoly::monomial(&vars, var, 1 << (k - 1), 1);
                    prev.pow(2)
                        .unwrap()
                        .sub(&prev.mul(&half).scale(3))
                        .add(&full.scale(4))
                }
            };
            phis.push(phi);
        }
        PsiTower { variant, phis }
    }

    pub fn phi(&self, k: u32) -> &LaurentPoly {
        &self.phis[(k - 1) as usize]
    }
}

// ---------------------------------------------------------------------------
// Hanoi and Sierpinski, unweighted
// ---------------------------------------------------------------------------

fn gen_set(
    family: Family,
    level: u32,
    labeling: GfLabeling,
    gamma: LaurentPoly,
    aux: Vec<(&str, LaurentPoly)>,
) -> GenFunSet {
    GenFunSet {
        family,
        level,
        labeling,
        gamma,
        aux: aux.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    }
}

/// Product of phi_k^(3^(n-k)) for k = 1..=n.
fn phi_product(tower: &PsiTower, n: u32) -> Result<LaurentPoly> {
    let mut prod = tower.phi(1).pow(3i32.pow(n - 1))?;
    for k in 2..=n {
        prod = prod.mul(&tower.phi(k).pow(3i32.pow(n - k))?);
    }
    Ok(prod)
}

pub fn hanoi_gamma_closed(n: u32) -> Result<GenFunSet> {
    check_level(n, 1)?;
    let tower = PsiTower::new(PsiVariant::Hanoi, n + 1);
    let prod = phi_product(&tower, n)?;
    let top = LaurentPoly::monomial(&["z"], "z", 1 << n, 1);
    let gamma = prod.mul(&tower.phi(n + 1).sub(&top));
    let upsilon = prod.shift_var("z", (1 << n) - 1);
    Ok(gen_set(
        Family::Hanoi,
        n,
        GfLabeling::Unweighted,
        gamma,
        vec![("upsilon", upsilon)],
    ))
}

pub fn hanoi_gamma_recursive(n: u32) -> Result<GenFunSet> {
    check_level(n, 1)?;
    let z = LaurentPoly::var(&["z"], "z");
    let mut gamma = LaurentPoly::one(&["z"]).add(&z.pow(3)?);
    let mut upsilon = z.clone().add(&z.pow(2)?);
    for _ in 1..n {
        let u3 = upsilon.pow(3)?;
        let next_gamma = gamma.pow(3)?.add(&z.pow(3)?.mul(&u3));
        let next_upsilon = z.mul(&upsilon.pow(2)?).mul(&gamma).add(&z.pow(2)?.mul(&u3));
        gamma = next_gamma;
        upsilon = next_upsilon;
    }
    Ok(gen_set(
        Family::Hanoi,
        n,
        GfLabeling::Unweighted,
        gamma,
        vec![("upsilon", upsilon)],
    ))
}

pub fn sierpinski_gamma_closed(n: u32) -> Result<GenFunSet> {
    check_level(n, 1)?;
    let tower = PsiTower::new(PsiVariant::Sierpinski, n + 1);
    let prod = phi_product(&tower, n)?;
    let top = LaurentPoly::monomial(&["u"], "u", 1 << n, 1);
    let gamma_u = prod.mul(&tower.phi(n + 1).sub(&top));
    let upsilon_u = prod.shift_var("u", 1 << n);
    // Only even u-powers may survive; report in z = u^2.
    let gamma = gamma_u.halve_var_exponents("u", "z")?;
    let upsilon = upsilon_u.halve_var_exponents("u", "z")?;
    Ok(gen_set(
        Family::Sierpinski,
        n,
        GfLabeling::Unweighted,
        gamma,
        vec![("upsilon", upsilon)],
    ))
}

pub fn sierpinski_gamma_recursive(n: u32) -> Result<GenFunSet> {
    check_level(n, 1)?;
    let z = LaurentPoly::var(&["z"], "z");
    let mut gamma = LaurentPoly::one(&["z"]).add(&z.pow(3)?);
    let mut upsilon = z.clone().add(&z.pow(2)?);
    for _ in 1..n {
        let u3 = upsilon.pow(3)?;
        let next_gamma = gamma.pow(3)?.add(&u3);
        let next_upsilon = upsilon.pow(2)?.mul(&gamma).add(&u3);
        gamma = next_gamma;
        upsilon = next_upsilon;
    }
    Ok(gen_set(
        Family::Sierpinski,
        n,
        GfLabeling::Unweighted,
        gamma,
        vec![("upsilon", upsilon)],
    ))
}

// ---------------------------------------------------------------------------
// Weighted systems (Hanoi Schreier, Sierpinski Schreier, rotation-invariant)
// ---------------------------------------------------------------------------

/// Label values fed to a weighted system: the label's own variable, the
/// constant 1 (marginals), or z (specialization checks).
fn label_polys(vars: &[&str], keep: Option<char>) -> [LaurentPoly; 3] {
    ['a', 'b', 'c'].map(|l| match keep {
        Some(k) if k != l => LaurentPoly::one(vars),
        _ => LaurentPoly::var(vars, &l.to_string()),
    })
}

fn weighted_vars(keep: Option<char>) -> Vec<String> {
    match keep {
        None => vec!["a".into(), "b".into(), "c".into()],
        Some(l) => vec![l.to_string()],
    }
}

struct FourFunctionState {
    gamma: LaurentPoly,
    lr: LaurentPoly,
    lu: LaurentPoly,
    ru: LaurentPoly,
}

/// Runs the four-function corner system for the Hanoi Schreier graphs
/// (with connector-edge prefactors) or the contracted Sierpinski graphs
/// (without them, the connectors being contracted away).
fn run_four_function_system(
    n: u32,
    with_prefactors: bool,
    keep: Option<char>,
) -> Result<FourFunctionState> {
    let vars_owned = weighted_vars(keep);
    let vars: Vec<&str> = vars_owned.iter().map(|s| s.as_str()).collect();
    let [pa, pb, pc] = label_polys(&vars, keep);
    let one = LaurentPoly::one(&vars);

    let mut st = FourFunctionState {
        gamma: one.add(&pa.mul(&pb).mul(&pc)),
        lr: pa.mul(&pc).add(&pb),
        lu: pa.add(&pb.mul(&pc)),
        ru: pc.add(&pa.mul(&pb)),
    };
    let unit = LaurentPoly::one(&vars);
    let (fa, fb, fc) = if with_prefactors {
        (pa.clone(), pb.clone(), pc.clone())
    } else {
        (unit.clone(), unit.clone(), unit.clone())
    };
    for _ in 1..n {
        let gamma3 = st.gamma.pow(3)?;
        let trip = st.lr.mul(&st.lu).mul(&st.ru);
        let next_gamma = gamma3.add(&fa.mul(&fb).mul(&fc).mul(&trip));
        let next_lu = fa
            .mul(&st.lr)
            .mul(&st.ru)
            .mul(&st.gamma)
            .add(&fb.mul(&fc).mul(&st.lu.pow(3)?));
        let next_ru = fc
            .mul(&st.lu)
            .mul(&st.lr)
            .mul(&st.gamma)
            .add(&fa.mul(&fb).mul(&st.ru.pow(3)?));
        let next_lr = fb
            .mul(&st.lu)
            .mul(&st.ru)
            .mul(&st.gamma)
            .add(&fa.mul(&fc).mul(&st.lr.pow(3)?));
        st = FourFunctionState {
            gamma: next_gamma,
            lr: next_lr,
            lu: next_lu,
            ru: next_ru,
        };
    }
    Ok(st)
}

pub fn hanoi_gamma_weighted(n: u32) -> Result<GenFunSet> {
    check_level(n, 1)?;
    let st = run_four_function_system(n, true, None)?;
    Ok(gen_set(
        Family::Hanoi,
        n,
        GfLabeling::SchreierLabels,
        st.gamma,
        vec![
            ("upsilon_lr", st.lr),
            ("upsilon_lu", st.lu),
            ("upsilon_ru", st.ru),
        ],
    ))
}

/// Weighted Gamma restricted to one label (other labels frozen at 1),
/// computed by running the system in a single variable. Substitution is a
/// ring homomorphism, so this equals restricting the full Gamma.
pub fn hanoi_weighted_marginal(n: u32, label: char) -> Result<LaurentPoly> {
    check_label(label)?;
    Ok(run_four_function_system(n, true, Some(label))?.gamma)
}

pub fn sierpinski_schreier_weighted(n: u32) -> Result<GenFunSet> {
    check_level(n, 1)?;
    let st = run_four_function_system(n, false, None)?;
    Ok(gen_set(
        Family::Sierpinski,
        n,
        GfLabeling::SchreierLabels,
        st.gamma,
        vec![
            ("upsilon_lr", st.lr),
            ("upsilon_lu", st.lu),
            ("upsilon_ru", st.ru),
        ],
    ))
}

pub fn sierpinski_schreier_marginal(n: u32, label: char) -> Result<LaurentPoly> {
    check_label(label)?;
    Ok(run_four_function_system(n, false, Some(label))?.gamma)
}

fn check_label(label: char) -> Result<()> {
    if !['a', 'b', 'c'].contains(&label) {
        return Err(Error::InvalidParams(format!(
            "ternary families have labels a, b, c; got {label}"
        )));
    }
    Ok(())
}

/// Initial conditions of the rotation-invariant system at level 2.
fn rotation_initial(keep: Option<char>) -> (LaurentPoly, LaurentPoly) {
    let vars_owned = weighted_vars(keep);
    let vars: Vec<&str> = vars_owned.iter().map(|s| s.as_str()).collect();
    let [a, b, c] = label_polys(&vars, keep);
    let one = LaurentPoly::one(&vars);
    let ab = a.mul(&b);
    let abc = ab.mul(&c);
    let c2 = c.pow(2).unwrap();
    let a2b2 = ab.pow(2).unwrap();
    // a^2 b^2 c^2 - a^2 b^2 c + a^2 b^2 + 4abc - a b c^2 - ab + c^2 - c + 1
    let core = a2b2
        .mul(&c2)
        .sub(&a2b2.mul(&c))
        .add(&a2b2)
        .add(&abc.scale(4))
        .sub(&ab.mul(&c2))
        .sub(&ab)
        .add(&c2)
        .sub(&c)
        .add(&one);
    let front = one.add(&c).mul(&one.add(&ab));
    let gamma2 = front.mul(&core);
    let upsilon2 = front.mul(&a.add(&b.mul(&c))).mul(&b.add(&a.mul(&c)));
    (gamma2, upsilon2)
}

/// Rotation-invariant weighted Gamma/Upsilon by the two-function recursion
/// from the level-2 initial conditions.
pub fn sierpinski_gamma_rotation_invariant(n: u32) -> Result<GenFunSet> {
    check_level(n, 2)?;
    let (mut gamma, mut upsilon) = rotation_initial(None);
    for _ in 2..n {
        let u3 = upsilon.pow(3)?;
        let next_gamma = gamma.pow(3)?.add(&u3);
        let next_upsilon = u3.add(&upsilon.pow(2)?.mul(&gamma));
        gamma = next_gamma;
        upsilon = next_upsilon;
    }
    Ok(gen_set(
        Family::Sierpinski,
        n,
        GfLabeling::RotationInvariant,
        gamma,
        vec![("upsilon", upsilon)],
    ))
}

pub fn sierpinski_rotation_marginal(n: u32, label: char) -> Result<LaurentPoly> {
    check_level(n, 2)?;
    check_label(label)?;
    let (mut gamma, mut upsilon) = rotation_initial(Some(label));
    for _ in 2..n {
        let u3 = upsilon.pow(3)?;
        let next_gamma = gamma.pow(3)?.add(&u3);
        let next_upsilon = u3.add(&upsilon.pow(2)?.mul(&gamma));
        gamma = next_gamma;
        upsilon = next_upsilon;
    }
    Ok(gamma)
}

/// Closed psi-form of the rotation-invariant Gamma, evaluated through the
/// combined product where all fractional powers cancel:
///
///   Gamma_n = ((1+c)(1+ab))^(3^(n-2)) * prod_{k=3..n} N_k^(3^(n-k))
///             * (N_{n+1} - D^(2^(n-2)))
///
/// with D = (a+bc)(b+ac), N_3 the level-3 numerator, and
/// N_k = N_{k-1}^2 - 3 N_{k-1} D^(2^(k-4)) + 4 D^(2^(k-3)) for k >= 4.
pub fn sierpinski_rotation_closed(n: u32) -> Result<GenFunSet> {
    check_level(n, 2)?;
    let vars = ["a", "b", "c"];
    let a = LaurentPoly::var(&vars, "a");
    let b = LaurentPoly::var(&vars, "b");
    let c = LaurentPoly::var(&vars, "c");
    let one = LaurentPoly::one(&vars);
    let d = a.add(&b.mul(&c)).mul(&b.add(&a.mul(&c)));
    let ab = a.mul(&b);
    let a2b2 = ab.pow(2)?;
    let c2 = c.pow(2)?;
    // N_3 = a^2b^2c^2 - a^2b^2c + a^2b^2 + 4abc + c^2 - c + 1 + a^2c + b^2c
    let n3 = a2b2
        .mul(&c2)
        .sub(&a2b2.mul(&c))
        .add(&a2b2)
        .add(&ab.mul(&c).scale(4))
        .add(&c2)
        .sub(&c)
        .add(&one)
        .add(&a.pow(2)?.mul(&c))
        .add(&b.pow(2)?.mul(&c));

    let depth = n + 1;
    let mut ns: Vec<LaurentPoly> = vec![n3];
    for k in 4..=depth {
        let prev = &ns[(k - 4) as usize];
        let dh = d.pow(1 << (k - 4))?;
        let df = d.pow(1 << (k - 3))?;
        let next = prev.pow(2)?.sub(&prev.mul(&dh).scale(3)).add(&df.scale(4));
        ns.push(next);
    }
    let n_at = |k: u32| &ns[(k - 3) as usize];

    let front = one.add(&c).mul(&one.add(&ab)).pow(3i32.pow(n - 2))?;
    let mut prod = front;
    for k in 3..=n {
        prod = prod.mul(&n_at(k).pow(3i32.pow(n - k))?);
    }
    let gamma = prod.mul(&n_at(n + 1).sub(&d.pow(1 << (n - 2))?));
    let upsilon = {
        let mut p = one.add(&c).mul(&one.add(&ab)).pow(3i32.pow(n - 2))?;
        for k in 3..=n {
            p = p.mul(&n_at(k).pow(3i32.pow(n - k))?);
        }
        p.mul(&d.pow(1 << (n - 2))?)
    };
    Ok(gen_set(
        Family::Sierpinski,
        n,
        GfLabeling::RotationInvariant,
        gamma,
        vec![("upsilon", upsilon)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(pairs: &[(i32, i64)]) -> LaurentPoly {
        pairs
            .iter()
            .fold(LaurentPoly::zero(&["z"]), |acc, &(e, c)| {
                acc.add(&LaurentPoly::monomial(&["z"], "z", e, c))
            })
    }

    fn z_var() -> LaurentPoly {
        LaurentPoly::var(&["z"], "z")
    }

    #[test]
    fn grigorchuk_level1_is_one() {
        assert!(grigorchuk_gamma(1, false).unwrap().gamma.is_one());
    }

    #[test]
    fn grigorchuk_level4_unweighted() {
        let g = grigorchuk_gamma(4, false).unwrap();
        let expect = zp(&[(0, 1), (2, 1)]).pow(7).unwrap();
        assert_eq!(g.gamma, expect);
        assert_eq!(g.gamma_at_ones(), 128);
    }

    #[test]
    fn grigorchuk_level3_weighted() {
        let g = grigorchuk_gamma(3, true).unwrap();
        let vars = ["a", "b", "c", "d"];
        let bc = LaurentPoly::one(&vars)
            .add(&LaurentPoly::var(&vars, "b").mul(&LaurentPoly::var(&vars, "c")));
        let bd = LaurentPoly::one(&vars)
            .add(&LaurentPoly::var(&vars, "b").mul(&LaurentPoly::var(&vars, "d")));
        assert_eq!(g.gamma, bc.pow(2).unwrap().mul(&bd));
    }

    #[test]
    fn grigorchuk_xyw_routes_agree() {
        for n in 1..=10 {
            assert_eq!(grigorchuk_xyw(n), grigorchuk_xyw_recursive(n), "level {n}");
            let (x, y, w) = grigorchuk_xyw(n);
            if n >= 2 {
                assert_eq!(x + y + w, (1 << (n - 1)) - 1);
            }
        }
        assert_eq!(grigorchuk_xyw(2), (1, 0, 0));
        assert_eq!(grigorchuk_xyw(3), (2, 1, 0));
    }

    #[test]
    fn basilica_small_levels() {
        assert_eq!(
            basilica_gamma(1, false).unwrap().gamma,
            zp(&[(0, 1), (2, 1)])
        );
        assert_eq!(
            basilica_gamma(3, false).unwrap().gamma,
            zp(&[(0, 1), (2, 1)])
                .pow(4)
                .unwrap()
                .mul(&zp(&[(0, 1), (4, 1)]))
        );
        let g4 = basilica_gamma(4, false).unwrap().gamma;
        let expect = zp(&[(0, 1), (2, 1)])
            .pow(6)
            .unwrap()
            .mul(&zp(&[(0, 1), (4, 1)]).pow(3).unwrap());
        assert_eq!(g4, expect);
    }

    #[test]
    fn basilica_level4_weighted() {
        let g = basilica_gamma(4, true).unwrap().gamma;
        let vars = ["a", "b"];
        let f = |name: &str, k: i32| one_plus_var_pow(&vars, name, k);
        let expect = f("a", 2)
            .pow(2)
            .unwrap()
            .mul(&f("b", 2).pow(4).unwrap())
            .mul(&f("a", 4))
            .mul(&f("b", 4).pow(2).unwrap());
        assert_eq!(g, expect);
    }

    #[test]
    fn grigorchuk_weighted_specializes_to_unweighted() {
        for n in 1..=5 {
            let mut w = grigorchuk_gamma(n, true).unwrap().gamma;
            for v in ["a", "b", "c", "d"] {
                w = w.substitute(v, &z_var()).unwrap();
            }
            assert_eq!(w, grigorchuk_gamma(n, false).unwrap().gamma, "level {n}");
        }
    }

    #[test]
    fn hanoi_gamma_float_evaluation() {
        // Gamma_1 = 1 + z^3 at z = tanh(1).
        use crate::poly::EVAL_PREC;
        use rug::Float;
        use std::collections::BTreeMap;
        let gamma = hanoi_gamma_recursive(1).unwrap().gamma;
        let z = Float::with_val(EVAL_PREC, 1).tanh();
        let mut asn = BTreeMap::new();
        asn.insert("z".to_string(), z.clone());
        let got = gamma.eval_float(&asn, EVAL_PREC).unwrap();
        let expect = Float::with_val(EVAL_PREC, z.square_ref()) * &z + 1u32;
        assert!(Float::with_val(EVAL_PREC, &got - &expect).abs() < 1e-70);
        assert!((got.to_f64() - (1.0 + 1.0f64.tanh().powi(3))).abs() < 1e-12);
    }

    #[test]
    fn basilica_weighted_specializes_to_unweighted() {
        for n in 1..=7 {
            let w = basilica_gamma(n, true).unwrap().gamma;
            let z = w
                .substitute("a", &z_var())
                .unwrap()
                .substitute("b", &z_var())
                .unwrap();
            assert_eq!(z, basilica_gamma(n, false).unwrap().gamma, "level {n}");
        }
    }

    #[test]
    fn hanoi_level1() {
        let g = hanoi_gamma_recursive(1).unwrap();
        assert_eq!(g.gamma, zp(&[(0, 1), (3, 1)]));
        assert_eq!(g.aux["upsilon"], zp(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn hanoi_level2_closed_product() {
        // (z+1)^3 (2z^2-z+1) (z^4-z^3+2z^2-2z+1)
        let expect = zp(&[(0, 1), (1, 1)])
            .pow(3)
            .unwrap()
            .mul(&zp(&[(2, 2), (1, -1), (0, 1)]))
            .mul(&zp(&[(4, 1), (3, -1), (2, 2), (1, -2), (0, 1)]));
        assert_eq!(hanoi_gamma_closed(2).unwrap().gamma, expect);
        assert_eq!(expect.at_ones(), 16);
    }

    #[test]
    fn hanoi_closed_equals_recursive() {
        for n in 1..=5 {
            let c = hanoi_gamma_closed(n).unwrap();
            let r = hanoi_gamma_recursive(n).unwrap();
            assert_eq!(c.gamma, r.gamma, "gamma level {n}");
            assert_eq!(c.aux["upsilon"], r.aux["upsilon"], "upsilon level {n}");
        }
    }

    #[test]
    fn hanoi_level3_count() {
        assert_eq!(
            hanoi_gamma_closed(3).unwrap().gamma_at_ones(),
            Integer::from(8192)
        );
    }

    #[test]
    fn sierpinski_level2_closed_product() {
        // (z+1)^3 (z^2+1) (z^4-3z^3+5z^2-3z+1)
        let expect = zp(&[(0, 1), (1, 1)])
            .pow(3)
            .unwrap()
            .mul(&zp(&[(2, 1), (0, 1)]))
            .mul(&zp(&[(4, 1), (3, -3), (2, 5), (1, -3), (0, 1)]));
        assert_eq!(sierpinski_gamma_closed(2).unwrap().gamma, expect);
    }

    #[test]
    fn sierpinski_closed_equals_recursive() {
        for n in 1..=5 {
            let c = sierpinski_gamma_closed(n).unwrap();
            let r = sierpinski_gamma_recursive(n).unwrap();
            assert_eq!(c.gamma, r.gamma, "gamma level {n}");
            assert_eq!(c.aux["upsilon"], r.aux["upsilon"], "upsilon level {n}");
        }
    }

    #[test]
    fn psi_tower_invariants() {
        for variant in [PsiVariant::Hanoi, PsiVariant::Sierpinski] {
            let t = PsiTower::new(variant, 8);
            for (k, phi) in t.phis.iter().enumerate() {
                assert_eq!(phi.at_ones(), 2, "phi_{}(1)", k + 1);
            }
        }
        let hanoi = PsiTower::new(PsiVariant::Hanoi, 4);
        assert_eq!(hanoi.phi(2), &zp(&[(2, 2), (1, -1), (0, 1)]));
        assert_eq!(
            hanoi.phi(3),
            &zp(&[(4, 2), (3, -1), (2, 2), (1, -2), (0, 1)])
        );
        for (k, phi) in hanoi.phis.iter().enumerate() {
            assert_eq!(phi.max_total_degree(), 1i64 << k, "deg phi_{}", k + 1);
        }
    }

    #[test]
    fn hanoi_weighted_initial_and_reduction() {
        let g1 = hanoi_gamma_weighted(1).unwrap();
        let vars = ["a", "b", "c"];
        let abc = LaurentPoly::var(&vars, "a")
            .mul(&LaurentPoly::var(&vars, "b"))
            .mul(&LaurentPoly::var(&vars, "c"));
        assert_eq!(g1.gamma, LaurentPoly::one(&vars).add(&abc));
        // Gamma_2(1,1,c) = (1+c)^4
        let m2 = hanoi_weighted_marginal(2, 'c').unwrap();
        let expect = one_plus_var_pow(&["c"], "c", 1).pow(4).unwrap();
        assert_eq!(m2, expect);
    }

    #[test]
    fn hanoi_weighted_specializes_to_unweighted() {
        for n in 1..=3 {
            let w = hanoi_gamma_weighted(n).unwrap();
            let z = w
                .gamma
                .substitute("a", &z_var())
                .unwrap()
                .substitute("b", &z_var())
                .unwrap()
                .substitute("c", &z_var())
                .unwrap();
            assert_eq!(z, hanoi_gamma_closed(n).unwrap().gamma, "level {n}");
        }
    }

    #[test]
    fn hanoi_marginal_matches_full_restriction() {
        for n in 1..=3 {
            for label in ['a', 'b', 'c'] {
                let full = hanoi_gamma_weighted(n).unwrap().gamma;
                let mut restricted = full;
                for other in ['a', 'b', 'c'] {
                    if other != label {
                        restricted = restricted
                            .substitute(&other.to_string(), &LaurentPoly::one(&["q"]))
                            .unwrap();
                    }
                }
                let marginal = hanoi_weighted_marginal(n, label).unwrap();
                assert_eq!(restricted, marginal, "level {n} label {label}");
            }
        }
    }

    #[test]
    fn rotation_initial_conditions() {
        let g = sierpinski_gamma_rotation_invariant(2).unwrap();
        // Upsilon_2 = (1+c)(1+ab)(a+bc)(b+ac)
        let vars = ["a", "b", "c"];
        let a = LaurentPoly::var(&vars, "a");
        let b = LaurentPoly::var(&vars, "b");
        let c = LaurentPoly::var(&vars, "c");
        let one = LaurentPoly::one(&vars);
        let expect_upsilon = one
            .add(&c)
            .mul(&one.add(&a.mul(&b)))
            .mul(&a.add(&b.mul(&c)))
            .mul(&b.add(&a.mul(&c)));
        assert_eq!(g.aux["upsilon"], expect_upsilon);
        assert_eq!(g.gamma_at_ones(), 16);
    }

    #[test]
    fn rotation_specializes_to_unweighted() {
        for n in 2..=4 {
            let w = sierpinski_gamma_rotation_invariant(n).unwrap();
            let z = w
                .gamma
                .substitute("a", &z_var())
                .unwrap()
                .substitute("b", &z_var())
                .unwrap()
                .substitute("c", &z_var())
                .unwrap();
            assert_eq!(z, sierpinski_gamma_closed(n).unwrap().gamma, "level {n}");
        }
    }

    #[test]
    fn rotation_closed_equals_recursion() {
        for n in 2..=4 {
            let closed = sierpinski_rotation_closed(n).unwrap();
            let rec = sierpinski_gamma_rotation_invariant(n).unwrap();
            assert_eq!(closed.gamma, rec.gamma, "gamma level {n}");
            assert_eq!(
                closed.aux["upsilon"], rec.aux["upsilon"],
                "upsilon level {n}"
            );
        }
    }

    #[test]
    fn sierpinski_schreier_weighted_specializes() {
        for n in 1..=3 {
            let w = sierpinski_schreier_weighted(n).unwrap();
            let z = w
                .gamma
                .substitute("a", &z_var())
                .unwrap()
                .substitute("b", &z_var())
                .unwrap()
                .substitute("c", &z_var())
                .unwrap();
            assert_eq!(z, sierpinski_gamma_recursive(n).unwrap().gamma, "level {n}");
        }
    }

    #[test]
    fn upsilon_at_one_equals_gamma_at_one() {
        for n in 1..=7 {
            let h = hanoi_gamma_closed(n).unwrap();
            assert_eq!(h.gamma_at_ones(), h.aux["upsilon"].at_ones(), "hanoi {n}");
            let s = sierpinski_gamma_recursive(n).unwrap();
            assert_eq!(
                s.gamma_at_ones(),
                s.aux["upsilon"].at_ones(),
                "sierpinski {n}"
            );
        }
    }

    #[test]
    fn gamma_shape_invariants() {
        for n in 1..=4 {
            for gf in [
                grigorchuk_gamma(n, false).unwrap(),
                basilica_gamma(n, false).unwrap(),
                hanoi_gamma_recursive(n).unwrap(),
                sierpinski_gamma_recursive(n).unwrap(),
            ] {
                assert_eq!(gf.gamma.constant_term(), 1, "{:?} {n}", gf.family);
                assert!(!gf.gamma.has_negative_coeff());
            }
        }
    }

    #[test]
    fn gamma_at_one_is_two_to_rank_and_degree_bounded() {
        use crate::graph::{build_schreier, contract_to_sierpinski};
        use crate::group::Family;
        for n in 1..=5u32 {
            let cases: Vec<(GenFunSet, crate::graph::LabeledMultigraph)> = vec![
                (
                    grigorchuk_gamma(n, false).unwrap(),
                    build_schreier(Family::Grigorchuk, n).unwrap(),
                ),
                (
                    grigorchuk_gamma(n, true).unwrap(),
                    build_schreier(Family::Grigorchuk, n).unwrap(),
                ),
                (
                    basilica_gamma(n, true).unwrap(),
                    build_schreier(Family::Basilica, n).unwrap(),
                ),
                (
                    hanoi_gamma_recursive(n).unwrap(),
                    build_schreier(Family::Hanoi, n).unwrap(),
                ),
                (
                    sierpinski_gamma_recursive(n).unwrap(),
                    contract_to_sierpinski(&build_schreier(Family::Hanoi, n).unwrap()).unwrap(),
                ),
            ];
            for (gf, g) in cases {
                let rank = g.cycle_space_rank().rank;
                assert_eq!(
                    gf.gamma_at_ones(),
                    Integer::from(1) << rank,
                    "{:?} {} n={n}",
                    gf.family,
                    gf.labeling.as_str()
                );
                assert!(
                    gf.gamma.max_total_degree() <= g.loopless_edge_count() as i64,
                    "{:?} n={n}: degree above edge count",
                    gf.family
                );
            }
        }
    }
}
