//! Backward recursion for the FactorUniform parameters x_i and ρ_τ(i).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundTable, Provider};
use crate::error::{Error, Result};
use crate::graph_core::HostInstance;
use crate::switchings::{Sign, SwitchClass, SwitchType};

/// Solved parameters for strata 0..=i1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterTable {
    pub i1: usize,
    pub epsilon: BigRational,
    pub x: Vec<BigRational>,
    /// ρ per stratum, in [`SwitchType::ALL`] order.
    pub rho: Vec<[BigRational; 9]>,
}

fn type_slot(ty: SwitchType) -> usize {
    SwitchType::ALL.iter().position(|&t| t == ty).expect("listed type")
}

impl ParameterTable {
    pub fn rho(&self, ty: SwitchType, i: usize) -> BigRational {
        self.rho.get(i).map(|r| r[type_slot(ty)].clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn x(&self, i: usize) -> BigRational {
        self.x.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// One row per stratum: i, x_i, then ρ for each type (as decimals).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,x");
        for ty in SwitchType::ALL {
            write!(s, ",rho_{}", ty.name()).unwrap();
        }
        s.push('\n');
        for i in 0..=self.i1 {
            write!(s, "{},{}", i, dec(&self.x[i])).unwrap();
            for r in &self.rho[i] {
                write!(s, ",{}", dec(r)).unwrap();
            }
            s.push('\n');
        }
        s
    }
}

fn dec(r: &BigRational) -> String {
    let f = r.to_f64().unwrap_or(f64::NAN);
    format!("{f:.12e}")
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn violated(stratum: usize, detail: String) -> Error {
    Error::SolverInvariantViolated { stratum, detail }
}

/// Solves the parameter system from the top stratum down. See the module docs
/// of [`crate::samplers`] for how the values are used.
pub fn solve_parameters(t: &BoundTable) -> Result<ParameterTable> {
    use SwitchType as T;
    let i1 = t.i1;
    let eps = t.epsilon.clone();
    let one = BigRational::one();
    let keep = &one - &eps;
    let m_i = |i: usize| t.upper(T::I, i);
    let plus = Sign::Plus;
    // m̄_I(i) is a divisor wherever Type I moves into or out of S_i are weighed
    for i in 0..=i1 {
        let used = i > 0 || !t.lower(SwitchClass::B1(plus), i).is_zero();
        if used && !m_i(i).is_positive() {
            return Err(violated(i, format!("m̄_I = {} is not positive", m_i(i))));
        }
    }
    let mut x = vec![BigRational::zero(); i1 + 1];
    let mut rho_i = vec![BigRational::zero(); i1 + 1];
    let mut rho_iii = vec![BigRational::zero(); i1 + 1];

    let kappa1 = |i: usize| {
        let b1 = t.lower(SwitchClass::B1(plus), i);
        if b1.is_zero() {
            b1
        } else {
            BigRational::from_integer(2.into()) * b1 / m_i(i)
        }
    };
    let denom = |i: usize| -> Result<BigRational> {
        let dn = &one - kappa1(i) * &keep;
        if dn.is_zero() {
            return Err(violated(i, "1 - κ1(1-ε) is zero".into()));
        }
        Ok(dn)
    };
    x[i1] = &one / denom(i1)?;
    rho_i[i1] = keep.clone();
    for i in (0..i1).rev() {
        let k1 = kappa1(i);
        let q1 = &x[i + 1] * &rho_i[i + 1] / m_i(i + 1);
        let mut k2 = &one + &q1 * (t.lower(SwitchClass::A, i) + BigRational::from_integer(2.into()) * t.lower(SwitchClass::C(plus), i));
        if i + 2 <= i1 {
            let q2 = &x[i + 2] * &rho_i[i + 2] / m_i(i + 2);
            k2 += BigRational::from_integer(2.into()) * q2 * t.lower(SwitchClass::B2(plus), i);
        }
        let k3 = &q1 * t.upper(T::III(plus), i);
        let xi = (&k2 - BigRational::from_integer(2.into()) * &k1 * &k3) / denom(i)?;
        if !xi.is_positive() {
            return Err(violated(i, format!("x = {xi} is not positive")));
        }
        rho_iii[i] = &k3 / &xi;
        rho_i[i] = &keep - BigRational::from_integer(2.into()) * &rho_iii[i];
        x[i] = xi;
    }
    if !x[i1].is_positive() {
        return Err(violated(i1, format!("x = {} is not positive", x[i1])));
    }

    let booster = |j: usize, step: usize, ty: SwitchType| -> Result<BigRational> {
        if j + step > i1 {
            return Ok(BigRational::zero());
        }
        let top = j + step;
        let mut r = &x[top] / &x[j] * &rho_i[top] * t.upper(ty, j) / m_i(top);
        if step > 1 {
            let g = t.gadget(ty, top);
            if g.is_zero() && t.provider == Provider::Oracle {
                return Ok(BigRational::zero());
            }
            if g.is_zero() {
                return Err(violated(top, format!("m̲̂_{} is zero", ty.name())));
            }
            r /= g;
        }
        Ok(r)
    };
    let mut rho = Vec::with_capacity(i1 + 1);
    for i in 0..=i1 {
        let a = booster(i, 1, T::IIa(plus))?;
        let b = booster(i, 2, T::IIb(plus))?;
        let c = booster(i, 3, T::IIc(plus))?;
        let row: [BigRational; 9] = [
            rho_i[i].clone(),
            a.clone(),
            a,
            b.clone(),
            b,
            c.clone(),
            c,
            rho_iii[i].clone(),
            rho_iii[i].clone(),
        ];
        let mut sum = BigRational::zero();
        for (k, r) in row.iter().enumerate() {
            if r.is_negative() || *r > one {
                return Err(violated(i, format!("ρ_{} = {r} outside [0, 1]", SwitchType::ALL[k].name())));
            }
            sum += r;
        }
        if sum > one {
            return Err(violated(i, format!("Σρ = {sum} exceeds 1")));
        }
        rho.push(row);
    }
    Ok(ParameterTable { i1, epsilon: eps, x, rho })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Whether d² + Δ² ≤ n/100, the range the inequality checks are stated for.
    pub in_regime: bool,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Inequality checks on a solved table, plus the exact identities of
/// [`fixed_point_residuals`] and [`q_identity_residuals`].
pub fn validate_parameters(p: &ParameterTable, t: &BoundTable, host: &HostInstance) -> ValidationReport {
    use SwitchType as T;
    let (n, d, dl) = (host.n() as i64, host.d() as i64, host.delta() as i64);
    let mut r = ValidationReport { in_regime: 100 * (d * d + dl * dl) <= n, checks: 0, failures: Vec::new() };
    let mut check = |ok: bool, msg: String| {
        r.checks += 1;
        if !ok {
            r.failures.push(msg);
        }
    };
    let one = BigRational::one();
    let plus = Sign::Plus;
    for i in 0..=p.i1 {
        check(p.x[i].is_positive(), format!("x_{i} = {} not positive", p.x[i]));
        if i < p.i1 && d * dl > 0 {
            let ratio = &p.x[i + 1] / &p.x[i];
            let cap = rat(23 * (i as i64 + 1), 10 * d * dl);
            check(ratio <= cap, format!("x_{}/x_{i} = {ratio} > {cap}", i + 1));
        }
        let mut sum = BigRational::zero();
        let mut boost = BigRational::zero();
        for (k, ty) in SwitchType::ALL.iter().enumerate() {
            let v = &p.rho[i][k];
            check(!v.is_negative() && *v <= one, format!("ρ_{}({i}) = {v} outside [0, 1]", ty.name()));
            sum += v;
            if matches!(ty, T::IIa(_) | T::IIb(_) | T::IIc(_)) {
                boost += v;
            }
        }
        check(sum <= one, format!("Σρ({i}) = {sum} > 1"));
        if n > 0 {
            let iii = p.rho(T::III(plus), i);
            let cap = rat(12 * dl * dl, 10 * d * n);
            check(iii <= cap, format!("ρ_III({i}) = {iii} > {cap}"));
            let a = p.rho(T::IIa(plus), i);
            let cap = rat(2 * dl * dl, n * n);
            check(a <= cap, format!("ρ_IIa({i}) = {a} > {cap}"));
            let b = p.rho(T::IIb(plus), i);
            let cap = rat(4 * d * dl, n * n);
            check(b < cap || b.is_zero() && cap.is_zero(), format!("ρ_IIb({i}) = {b} >= {cap}"));
            let c = p.rho(T::IIc(plus), i);
            let cap = rat(dl * dl, 2 * n * n);
            check(c < cap || c.is_zero() && cap.is_zero(), format!("ρ_IIc({i}) = {c} >= {cap}"));
            check(boost < p.epsilon || boost.is_zero(), format!("booster Σρ({i}) = {boost} >= ε = {}", p.epsilon));
        }
    }
    for f in fixed_point_residuals(p, t) {
        check(false, f);
    }
    for f in q_identity_residuals(p, t) {
        check(false, f);
    }
    r
}

/// Strata where x_i differs from the right-hand side of the visit-count
/// recursion it was solved from (exact rationals; expected empty).
pub fn fixed_point_residuals(p: &ParameterTable, t: &BoundTable) -> Vec<String> {
    use SwitchType as T;
    let plus = Sign::Plus;
    let two = BigRational::from_integer(2.into());
    let q = |i: usize| -> BigRational {
        if i > p.i1 || t.upper(T::I, i).is_zero() {
            BigRational::zero()
        } else {
            &p.x[i] * p.rho(T::I, i) / t.upper(T::I, i)
        }
    };
    let mut out = Vec::new();
    for i in 0..=p.i1 {
        let rhs = BigRational::one()
            + q(i + 1) * t.lower(SwitchClass::A, i)
            + &two * q(i) * t.lower(SwitchClass::B1(plus), i)
            + &two * q(i + 2) * t.lower(SwitchClass::B2(plus), i)
            + &two * q(i + 1) * t.lower(SwitchClass::C(plus), i);
        if rhs != p.x[i] {
            out.push(format!("fixed point fails at stratum {i}: x = {}, rhs = {rhs}", p.x[i]));
        }
    }
    out
}

/// Checks that every booster type produces its result structures at the same
/// per-structure rate as Type I: x_i ρ_I(i)/m̄_I(i) equals the corresponding
/// booster expression. Boosters that are switched off (ρ = 0 because the
/// bound table disables them) are skipped.
pub fn q_identity_residuals(p: &ParameterTable, t: &BoundTable) -> Vec<String> {
    use SwitchType as T;
    let plus = Sign::Plus;
    let mut out = Vec::new();
    let q_i = |i: usize| {
        let m = t.upper(T::I, i);
        if m.is_zero() {
            m
        } else {
            &p.x[i] * p.rho(T::I, i) / m
        }
    };
    for i in 0..=p.i1 {
        let qi = q_i(i);
        if i >= 1 {
            let m = t.upper(T::IIa(plus), i - 1);
            if !m.is_zero() {
                let v = &p.x[i - 1] * p.rho(T::IIa(plus), i - 1) / m;
                if v != qi {
                    out.push(format!("IIa rate differs at stratum {i}"));
                }
            }
        }
        for (step, ty) in [(2usize, T::IIb(plus)), (3, T::IIc(plus))] {
            if i < step {
                continue;
            }
            let m = t.upper(ty, i - step);
            let g = t.gadget(ty, i);
            let r = p.rho(ty, i - step);
            if m.is_zero() || g.is_zero() || r.is_zero() && !qi.is_zero() && t.provider == Provider::Oracle {
                continue;
            }
            let v = &p.x[i - step] * r * g / m;
            if v != qi {
                out.push(format!("{} rate differs at stratum {i}", ty.name()));
            }
        }
        if i < p.i1 {
            let m = t.upper(T::III(plus), i);
            if !m.is_zero() {
                let v = &p.x[i] * p.rho(T::III(plus), i) / m;
                if v != q_i(i + 1) {
                    out.push(format!("III rate differs at stratum {i}"));
                }
            }
        }
    }
    out
}
