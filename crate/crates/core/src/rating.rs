//! Top-1 ratio and multi-team TrueSkill.
//!
//! Each team is a single player. Teams are sorted by rank and linked by a
//! chain of difference factors; win and draw truncations are approximated by
//! expectation propagation until the messages settle.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatingError {
    #[error("no matches to rate")]
    Empty,
    #[error("{ratings} ratings but {ranks} ranks")]
    Mismatch { ratings: usize, ranks: usize },
    #[error("invalid parameters")]
    BadParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rating<T = f64> {
    pub mu: T,
    pub sigma: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrueSkillParams<T = f64> {
    pub mu0: T,
    pub sigma0: T,
    pub beta: T,
    pub tau: T,
    pub p_draw: T,
}

fn c<T: FromPrimitive>(v: f64) -> T {
    T::from_f64(v).expect("constant representable")
}

impl<T: Float + FromPrimitive> Default for TrueSkillParams<T> {
    fn default() -> Self {
        TrueSkillParams { mu0: c(25.0), sigma0: c(25.0 / 3.0), beta: c(25.0 / 6.0), tau: c(25.0 / 300.0), p_draw: c(0.1) }
    }
}

impl<T: Float + FromPrimitive> TrueSkillParams<T> {
    pub fn prior(&self) -> Rating<T> {
        Rating { mu: self.mu0, sigma: self.sigma0 }
    }

    pub fn validate(&self) -> Result<(), RatingError> {
        let ok = self.sigma0 > T::zero()
            && self.beta > T::zero()
            && self.tau >= T::zero()
            && self.p_draw >= T::zero()
            && self.p_draw < T::one();
        ok.then_some(()).ok_or(RatingError::BadParams)
    }

    /// Margin inside which a performance difference counts as a draw.
    pub fn draw_margin(&self) -> T {
        let p = self.p_draw.to_f64().unwrap_or(0.0);
        if p <= 0.0 {
            return T::zero();
        }
        let z = Normal::standard().inverse_cdf((p + 1.0) / 2.0);
        c::<T>(z * 2f64.sqrt()) * self.beta
    }
}

/// Conservative estimate used to order the leaderboard.
pub fn leaderboard_score<T: Float + FromPrimitive>(r: &Rating<T>) -> T {
    r.mu - c::<T>(3.0) * r.sigma
}

/// Fraction of matches finished at rank 1.
pub fn top1_ratio(ranks: &[u32]) -> Result<f64, RatingError> {
    if ranks.is_empty() {
        return Err(RatingError::Empty);
    }
    Ok(ranks.iter().filter(|&&r| r == 1).count() as f64 / ranks.len() as f64)
}

/// A Gaussian in natural parameters: precision and precision-adjusted mean.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Gauss<T> {
    pi: T,
    tau: T,
}

impl<T: Float> Gauss<T> {
    fn uniform() -> Self {
        Gauss { pi: T::zero(), tau: T::zero() }
    }

    fn from_moments(mu: T, var: T) -> Self {
        let pi = var.recip();
        Gauss { pi, tau: pi * mu }
    }

    fn mu(self) -> T {
        if self.pi == T::zero() {
            T::zero()
        } else {
            self.tau / self.pi
        }
    }

    fn var(self) -> T {
        if self.pi == T::zero() {
            T::infinity()
        } else {
            self.pi.recip()
        }
    }

    fn mul(self, o: Self) -> Self {
        Gauss { pi: self.pi + o.pi, tau: self.tau + o.tau }
    }

    fn div(self, o: Self) -> Self {
        Gauss { pi: self.pi - o.pi, tau: self.tau - o.tau }
    }

    /// Add independent noise of variance `v`.
    fn widen(self, v: T) -> Self {
        let k = (T::one() + v * self.pi).recip();
        Gauss { pi: self.pi * k, tau: self.tau * k }
    }
}

fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Mean and variance corrections for a win truncation at standardized `t`.
fn v_w_win(t: f64) -> (f64, f64) {
    let denom = cdf(t);
    if denom < 1e-300 || t < -37.0 {
        return (-t, 1.0);
    }
    let v = pdf(t) / denom;
    (v, (v * (v + t)).clamp(1e-12, 1.0 - 1e-12))
}

/// Corrections for a draw truncation of `x` into `[-eps, eps]`.
fn v_w_draw(x: f64, eps: f64) -> (f64, f64) {
    let ax = x.abs();
    let a = eps - ax;
    let b = -eps - ax;
    let denom = cdf(a) - cdf(b);
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    if denom < 1e-300 {
        return (sign * -(ax - eps), 1.0);
    }
    let v = (pdf(b) - pdf(a)) / denom;
    let w = v * v + (a * pdf(a) - b * pdf(b)) / denom;
    (sign * v, w.clamp(1e-12, 1.0 - 1e-12))
}

const MAX_SWEEPS: usize = 20;
const TOLERANCE: f64 = 1e-4;

/// Posterior ratings after one match. Lower rank is better; equal ranks draw.
pub fn rate_match<T: Float + FromPrimitive + Debug>(
    ratings: &[Rating<T>],
    ranks: &[u32],
    params: &TrueSkillParams<T>,
) -> Result<Vec<Rating<T>>, RatingError> {
    params.validate()?;
    if ratings.len() != ranks.len() {
        return Err(RatingError::Mismatch { ratings: ratings.len(), ranks: ranks.len() });
    }
    if ratings.iter().any(|r| r.sigma <= T::zero() || !r.mu.is_finite()) {
        return Err(RatingError::BadParams);
    }
    let n = ratings.len();
    if n < 2 {
        return Ok(ratings.iter().map(|r| widen_prior(r, params)).collect());
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (ranks[a], ratings[a].mu, ratings[a].sigma, a)
            .partial_cmp(&(ranks[b], ratings[b].mu, ratings[b].sigma, b))
            .expect("finite ratings")
    });

    let beta2 = params.beta * params.beta;
    let tau2 = params.tau * params.tau;
    let eps = params.draw_margin().to_f64().unwrap_or(0.0);

    // Prior on each performance, in chain order.
    let perf: Vec<Gauss<T>> = order
        .iter()
        .map(|&i| {
            let r = ratings[i];
            Gauss::from_moments(r.mu, r.sigma * r.sigma + tau2 + beta2)
        })
        .collect();
    let draw: Vec<bool> = (0..n - 1).map(|k| ranks[order[k]] == ranks[order[k + 1]]).collect();

    let mut to_left = vec![Gauss::uniform(); n - 1];
    let mut to_right = vec![Gauss::uniform(); n - 1];
    let mut trunc = vec![Gauss::uniform(); n - 1];
    let mut last_diff: Vec<(f64, f64)> = vec![(f64::NAN, f64::NAN); n - 1];

    let mut update = |k: usize, to_left: &mut [Gauss<T>], to_right: &mut [Gauss<T>], trunc: &mut [Gauss<T>]| -> f64 {
        let mut left = perf[k];
        if k > 0 {
            left = left.mul(to_right[k - 1]);
        }
        let mut right = perf[k + 1];
        if k + 1 < n - 1 {
            right = right.mul(to_left[k + 1]);
        }
        let mean = (left.mu() - right.mu()).to_f64().unwrap_or(0.0);
        let var = (left.var() + right.var()).to_f64().unwrap_or(f64::INFINITY);
        let sd = var.sqrt();
        let (v, w) = if draw[k] { v_w_draw(mean / sd, eps / sd) } else { v_w_win(mean / sd - eps / sd) };
        let new_mean = mean + sd * v;
        let new_var = var * (1.0 - w);
        let cavity = Gauss::from_moments(c::<T>(mean), c::<T>(var));
        let marginal = Gauss::from_moments(c::<T>(new_mean), c::<T>(new_var));
        trunc[k] = marginal.div(cavity);
        let tm = trunc[k];
        to_left[k] = Gauss::from_moments(tm.mu() + right.mu(), tm.var() + right.var());
        to_left[k] = if tm.pi == T::zero() { Gauss::uniform() } else { to_left[k] };
        to_right[k] = if tm.pi == T::zero() {
            Gauss::uniform()
        } else {
            Gauss::from_moments(left.mu() - tm.mu(), tm.var() + left.var())
        };
        let (pm, ps) = last_diff[k];
        last_diff[k] = (new_mean, new_var.sqrt());
        if pm.is_nan() {
            f64::INFINITY
        } else {
            (pm - new_mean).abs().max((ps - new_var.sqrt()).abs())
        }
    };

    for _ in 0..MAX_SWEEPS {
        let mut delta: f64 = 0.0;
        for k in 0..n - 1 {
            delta = delta.max(update(k, &mut to_left, &mut to_right, &mut trunc));
        }
        for k in (0..n - 1).rev() {
            delta = delta.max(update(k, &mut to_left, &mut to_right, &mut trunc));
        }
        if delta < TOLERANCE {
            break;
        }
    }

    let mut out = vec![params.prior(); n];
    for (pos, &i) in order.iter().enumerate() {
        let mut up = Gauss::uniform();
        if pos > 0 {
            up = up.mul(to_right[pos - 1]);
        }
        if pos < n - 1 {
            up = up.mul(to_left[pos]);
        }
        let r = ratings[i];
        let prior = Gauss::from_moments(r.mu, r.sigma * r.sigma + tau2);
        let post = prior.mul(up.widen(beta2));
        out[i] = Rating { mu: post.mu(), sigma: post.var().sqrt() };
    }
    Ok(out)
}

fn widen_prior<T: Float + FromPrimitive>(r: &Rating<T>, params: &TrueSkillParams<T>) -> Rating<T> {
    Rating { mu: r.mu, sigma: (r.sigma * r.sigma + params.tau * params.tau).sqrt() }
}

/// Kendall rank correlation (tau-a) between two score lists.
pub fn kendall_tau(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let x = (a[i] - a[j]).signum() * (b[i] - b[j]).signum();
            s += x as i64;
        }
    }
    let pairs = (n * n.saturating_sub(1) / 2).max(1);
    s as f64 / pairs as f64
}
