//! Stratum caps, closed-form switching-count bounds and the bound table that
//! the samplers and the solver consume.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_core::HostInstance;
use crate::switchings::{SwitchClass, SwitchType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Provider {
    #[default]
    Analytic,
    Oracle,
}

/// Which stratum cap a table is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Easy,
    Uniform,
}

fn int(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn frac(a: i128, b: i128) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn pw(x: i128, e: u32) -> BigRational {
    int(x).pow(e as i32)
}

struct P {
    n: i128,
    d: i128,
    dl: i128,
    e: i128,
}

fn params(host: &HostInstance) -> P {
    P { n: host.n() as i128, d: host.d() as i128, dl: host.delta() as i128, e: host.m_red_total() as i128 }
}

/// floor(2 |E(H̄)| d / n).
pub fn i1_easy(host: &HostInstance) -> usize {
    2 * host.m_red_total() * host.d() / host.n()
}

/// floor(2 d Δ / 3); needs a regular forbidden graph.
pub fn i1_uniform(host: &HostInstance) -> Result<usize> {
    if !host.regular_complement() {
        return Err(Error::NotRegularComplement);
    }
    Ok(2 * host.d() * host.delta() / 3)
}

pub fn i1(host: &HostInstance, regime: Regime) -> Result<usize> {
    match regime {
        Regime::Easy => Ok(i1_easy(host)),
        Regime::Uniform => i1_uniform(host),
    }
}

/// (m̄(i), m̲(i)) for the 3-edge switching.
pub fn easy_bounds(host: &HostInstance, i: usize) -> (BigInt, BigInt) {
    let P { n, d, dl, e } = params(host);
    let i = i as i128;
    let dn = BigInt::from(d * n);
    let upper = BigInt::from(2 * i) * &dn * &dn;
    let lower = BigInt::from(2 * e - 2 * i) * BigInt::from(d * d) * BigInt::from(d * n - 2 * i - 8 * d)
        - BigInt::from(4 * e) * BigInt::from(d * d * d) * BigInt::from(d + dl)
        - BigInt::from(4 * i * dl * d * d * n);
    (upper, lower)
}

/// m̄_τ(i). Orientation does not matter.
pub fn uniform_upper(host: &HostInstance, ty: SwitchType, i: usize) -> BigRational {
    let P { n, d, dl, .. } = params(host);
    let i = i as i128;
    match ty {
        SwitchType::I => {
            let dn = d * n;
            let factor = BigRational::one() + int(28) * (frac((dl + d) * (dl + d), n * n) + frac(1, n));
            int(2 * i) * pw(dn, 3) * factor
                - int(8 * i * (d - 1) * (d - 1) * d * d) * pw(n, 2)
                - int(4 * i * dl) * pw(d, 3) * pw(n, 2)
                - int(4 * i * i) * pw(dn, 2)
        }
        SwitchType::IIa(_) => int(2 * i * dl * dl) * pw(d, 3) * int(n),
        SwitchType::IIb(_) => pw(dl, 2) * pw(d, 9) * pw(n, 5),
        SwitchType::IIc(_) => pw(dl, 3) * pw(d, 11) * pw(n, 6),
        SwitchType::III(_) => pw(dl, 3) * pw(d, 3) * pw(n, 2),
    }
}

/// m̲_α(i). Orientation does not matter.
pub fn uniform_lower(host: &HostInstance, alpha: SwitchClass, i: usize) -> BigRational {
    let P { n, d, dl, .. } = params(host);
    let i = i as i128;
    match alpha {
        SwitchClass::A => {
            int(dl * n - 2 * i) * pw(d, 2) * pw(d * n, 2) * (BigRational::one() - frac(30, n))
                - int(3 * dl) * pw(d, 5) * pw(n, 2)
                - int(8 * i * dl) * pw(d, 3) * pw(n, 2)
                - int(3 * dl * dl) * pw(d, 4) * pw(n, 2)
        }
        SwitchClass::B1(_) => {
            int(2 * i * (dl - 1) * (d - 1)) * pw(d * n - 2 * i - 10 * d, 2) - int(6 * i * (dl - 1) * (d + dl)) * pw(d, 3) * int(n)
        }
        SwitchClass::B2(_) => {
            int((dl * n - 2 * i) * dl * n) * pw(d, 4)
                - int(8 * i * dl * dl * n) * pw(d, 3)
                - int(2 * i * dl * n) * pw(d, 4)
                - int(2 * dl * dl * n) * pw(d, 5)
                - int(12 * dl * dl * n) * pw(d, 4)
        }
        SwitchClass::C(_) => pw(d, 3) * pw(dl, 3) * pw(n, 2) * (BigRational::one() - frac(8 * (d + dl), n)),
    }
}

/// m̲̂_τ(i) for τ ∈ {IIb±, IIc±}.
pub fn gadget_lower(host: &HostInstance, ty: SwitchType, i: usize) -> Result<BigRational> {
    let P { n, d, dl, .. } = params(host);
    let i = i as i128;
    let dn = d * n;
    match ty {
        SwitchType::IIb(_) => Ok(pw(dn - 2 * i - 12, 4) - int(6 * d * d) * pw(dn, 3) - int(6 * dl * d) * pw(dn, 3)),
        SwitchType::IIc(_) => Ok(pw(dn - 2 * i - 14, 6) - int(9 * d * d) * pw(dn, 5) - int(9 * dl * d) * pw(dn, 5)),
        _ => Err(Error::WrongVariant),
    }
}

/// 5 ((Δ + d) / n)².
pub fn epsilon(host: &HostInstance) -> BigRational {
    let P { n, d, dl, .. } = params(host);
    int(5) * frac((dl + d) * (dl + d), n * n)
}

/// Upper bound on b_B2 from the same counting argument as m̲_B2.
pub fn b2_upper(host: &HostInstance, i: usize) -> BigRational {
    let P { n, d, dl, .. } = params(host);
    int((dl * n - 2 * i as i128) * dl * n) * pw(d, 4)
}

/// Upper bound on b_C.
pub fn c_upper(host: &HostInstance) -> BigRational {
    let P { n, d, dl, .. } = params(host);
    pw(d, 3) * pw(dl, 3) * pw(n, 2)
}

/// Lower bound on f_III.
pub fn iii_lower(host: &HostInstance) -> BigRational {
    let P { n, d, dl, .. } = params(host);
    uniform_upper(host, SwitchType::III(crate::switchings::Sign::Plus), 0) * (BigRational::one() - frac(8 * (d + dl), n))
}

pub(crate) fn upper_slot(ty: SwitchType) -> usize {
    match ty {
        SwitchType::I => 0,
        SwitchType::IIa(_) => 1,
        SwitchType::IIb(_) => 2,
        SwitchType::IIc(_) => 3,
        SwitchType::III(_) => 4,
    }
}

pub(crate) fn lower_slot(alpha: SwitchClass) -> usize {
    match alpha {
        SwitchClass::A => 0,
        SwitchClass::B1(_) => 1,
        SwitchClass::B2(_) => 2,
        SwitchClass::C(_) => 3,
    }
}

/// Per-stratum bounds for strata 0..=i1. Values outside that range read as 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub provider: Provider,
    pub regime: Regime,
    pub i1: usize,
    pub epsilon: BigRational,
    pub easy_upper: Vec<BigRational>,
    pub easy_lower: Vec<BigRational>,
    pub upper: [Vec<BigRational>; 5],
    pub lower: [Vec<BigRational>; 4],
    pub gadget: [Vec<BigRational>; 2],
}

fn get(v: &[BigRational], i: usize) -> BigRational {
    v.get(i).cloned().unwrap_or_else(BigRational::zero)
}

impl BoundTable {
    /// Closed-form values for every stratum up to the regime's cap.
    pub fn analytic(host: &HostInstance, regime: Regime) -> Result<BoundTable> {
        use crate::switchings::Sign::Plus;
        let i1 = i1(host, regime)?;
        let range = 0..=i1;
        let easy: Vec<(BigInt, BigInt)> = range.clone().map(|i| easy_bounds(host, i)).collect();
        let ups = [SwitchType::I, SwitchType::IIa(Plus), SwitchType::IIb(Plus), SwitchType::IIc(Plus), SwitchType::III(Plus)];
        let lows = [SwitchClass::A, SwitchClass::B1(Plus), SwitchClass::B2(Plus), SwitchClass::C(Plus)];
        Ok(BoundTable {
            provider: Provider::Analytic,
            regime,
            i1,
            epsilon: epsilon(host),
            easy_upper: easy.iter().map(|(u, _)| BigRational::from_integer(u.clone())).collect(),
            easy_lower: easy.iter().map(|(_, l)| BigRational::from_integer(l.clone())).collect(),
            upper: ups.map(|t| range.clone().map(|i| uniform_upper(host, t, i)).collect()),
            lower: lows.map(|a| range.clone().map(|i| uniform_lower(host, a, i)).collect()),
            gadget: [SwitchType::IIb(Plus), SwitchType::IIc(Plus)]
                .map(|t| range.clone().map(|i| gadget_lower(host, t, i).expect("gadget type")).collect()),
        })
    }

    pub fn upper(&self, ty: SwitchType, i: usize) -> BigRational {
        get(&self.upper[upper_slot(ty)], i)
    }

    pub fn lower(&self, alpha: SwitchClass, i: usize) -> BigRational {
        get(&self.lower[lower_slot(alpha)], i)
    }

    pub fn gadget(&self, ty: SwitchType, i: usize) -> BigRational {
        match ty {
            SwitchType::IIb(_) => get(&self.gadget[0], i),
            SwitchType::IIc(_) => get(&self.gadget[1], i),
            _ => BigRational::zero(),
        }
    }

    pub fn easy_upper(&self, i: usize) -> BigRational {
        get(&self.easy_upper, i)
    }

    pub fn easy_lower(&self, i: usize) -> BigRational {
        get(&self.easy_lower, i)
    }

    fn guard(&self, stratum: usize, detail: String) -> Error {
        Error::BoundGuard { stratum, detail }
    }

    /// Refuses a lower bound that cannot serve as an acceptance numerator for `b`.
    pub fn check_lower(&self, what: &str, stratum: usize, lower: &BigRational, b: u128) -> Result<()> {
        if self.provider == Provider::Analytic && !lower.is_positive() {
            return Err(self.guard(stratum, format!("{what} lower bound {lower} is not positive")));
        }
        if lower.is_negative() || *lower > int(b as i128) {
            return Err(self.guard(stratum, format!("{what} lower bound {lower} exceeds count {b}")));
        }
        Ok(())
    }

    /// Refuses an upper bound below the actual count.
    pub fn check_upper(&self, what: &str, stratum: usize, upper: &BigRational, f: u128) -> Result<()> {
        if int(f as i128) > *upper {
            return Err(self.guard(stratum, format!("{what} count {f} exceeds upper bound {upper}")));
        }
        Ok(())
    }
}

/// Exact per-stratum extrema over every graph in the strata (tiny instances only).
pub fn oracle_extrema(host: &HostInstance, regime: Regime, budget: u64) -> Result<BoundTable> {
    crate::oracle::oracle_bound_table(host, regime, budget)
}
