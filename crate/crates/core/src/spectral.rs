//! Channel outputs on isotypical blocks from dimensions and LR coefficients
//! alone, plus the exponential overlap bound, the `X`/`Y` dimension-product
//! optimization and its entropy bound.
//!
//! Weights are overlaps `tr{P_λ' · A}`. With `A = S̄_n[tr_{[k]}P_λ ⊗ π_{[k]}]`,
//! the twirl can be dropped (`P_λ'` is permutation invariant), and
//! `tr{P_λ'(P_μ ⊗ P_γ)} = dim F_λ' · α(λ', μ, γ)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frames::{binary_entropy, dim_sym, dim_unitary, frames_of, Shape, YoungFrame};
use crate::lr::{lr_coefficient, lr_nonzero_pairs};
use crate::rational::{binomial_weight, int, ExactScalar};

/// `tr_{[k]} P_λ = Σ_{(μ,ν)} coeff(μ,ν) · P_μ`, one coefficient per pair with
/// `c^λ_{μν} ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingTable {
    source: YoungFrame,
    l: usize,
    k: usize,
    entries: Vec<((YoungFrame, YoungFrame), ExactScalar)>,
}

impl BranchingTable {
    pub fn source(&self) -> &YoungFrame {
        &self.source
    }

    /// `(l, k)`: kept and traced site counts.
    pub fn split(&self) -> (usize, usize) {
        (self.l, self.k)
    }

    pub fn entries(&self) -> &[((YoungFrame, YoungFrame), ExactScalar)] {
        &self.entries
    }

    pub fn get(&self, mu: &YoungFrame, nu: &YoungFrame) -> ExactScalar {
        self.entries
            .iter()
            .find(|((m, v), _)| m == mu && v == nu)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(ExactScalar::zero)
    }

    /// `Σ_ν coeff(μ,ν)` per `μ`, i.e. the coefficient of `P_μ`.
    pub fn mu_coefficients(&self) -> Vec<(YoungFrame, ExactScalar)> {
        let mut out: Vec<(YoungFrame, ExactScalar)> = Vec::new();
        for ((mu, _), c) in &self.entries {
            match out.last_mut() {
                Some((m, acc)) if m == mu => *acc += c,
                _ => out.push((mu.clone(), c.clone())),
            }
        }
        out
    }
}

/// Weights indexed by every `λ' ∈ YF_{d,n}`, in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralTable {
    n: usize,
    d: usize,
    entries: Vec<(YoungFrame, ExactScalar)>,
}

impl SpectralTable {
    pub fn new(d: usize, n: usize, entries: Vec<(YoungFrame, ExactScalar)>) -> Result<Self> {
        let frames = crate::frames::enumerate_frames(d, n)?;
        if frames.len() != entries.len() || frames.iter().zip(&entries).any(|(f, (g, _))| f != g) {
            return Err(Error::SizeMismatch(format!(
                "table rows do not match YF_{{{d},{n}}}"
            )));
        }
        Ok(SpectralTable { n, d, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[(YoungFrame, ExactScalar)] {
        &self.entries
    }

    pub fn get(&self, lambda_prime: &YoungFrame) -> ExactScalar {
        self.entries
            .iter()
            .find(|(f, _)| f == lambda_prime)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn total(&self) -> ExactScalar {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// Frames with nonzero weight.
    pub fn support(&self) -> Vec<&YoungFrame> {
        self.entries
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(f, _)| f)
            .collect()
    }

    /// The heaviest frame; the first in enumeration order on ties.
    pub fn mode(&self) -> Option<&YoungFrame> {
        let mut best: Option<&(YoungFrame, ExactScalar)> = None;
        for entry in &self.entries {
            if best.is_none_or(|b| entry.1 > b.1) {
                best = Some(entry);
            }
        }
        best.map(|(f, _)| f)
    }

    fn scaled_sum(tables: &[(ExactScalar, &SpectralTable)], d: usize, n: usize) -> SpectralTable {
        let mut entries: Vec<(YoungFrame, ExactScalar)> = frames_of(d, n)
            .into_iter()
            .map(|f| (f, ExactScalar::zero()))
            .collect();
        for (w, t) in tables {
            if w.is_zero() {
                continue;
            }
            for (slot, (_, v)) in entries.iter_mut().zip(&t.entries) {
                slot.1 += w * v;
            }
        }
        SpectralTable { n, d, entries }
    }
}

fn check_split(lambda: &YoungFrame, k: usize) -> Result<()> {
    if k > lambda.n() {
        return Err(Error::SizeMismatch(format!(
            "cannot trace {k} of {} sites",
            lambda.n()
        )));
    }
    Ok(())
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// `coeff(μ,ν) = dim U_λ · c^λ_{μν} · dim F_ν / dim U_μ` over
/// `μ ∈ YF_{d,n−k}`, `ν ∈ YF_{d,k}`, `d` the row budget of `λ`.
pub fn partial_trace_decomposition(lambda: &YoungFrame, k: usize) -> Result<BranchingTable> {
    check_split(lambda, k)?;
    let d = lambda.d();
    let l = lambda.n() - k;
    let dim_u = dim_unitary(lambda, d);
    let entries = lr_nonzero_pairs(lambda, l, k)
        .into_iter()
        .map(|(mu, nu)| {
            let c = lr_coefficient(lambda, &mu, &nu);
            let value = BigRational::new(
                big(dim_u) * big(c) * big(dim_sym(&nu)),
                big(dim_unitary(&mu, d)),
            );
            ((mu, nu), value)
        })
        .collect();
    Ok(BranchingTable {
        source: lambda.clone(),
        l,
        k,
        entries,
    })
}

/// `α(λ',μ,γ) = c^{λ'}_{μγ} · dim F_μ · dim F_γ · dim U_λ' / dim F_λ'`;
/// zero exactly when the LR coefficient is.
pub fn alpha(
    lambda_prime: &impl Shape,
    mu: &impl Shape,
    gamma: &impl Shape,
    d: usize,
) -> ExactScalar {
    let c = lr_coefficient(lambda_prime, mu, gamma);
    if c == 0 {
        return ExactScalar::zero();
    }
    BigRational::new(
        big(c) * big(dim_sym(mu)) * big(dim_sym(gamma)) * big(dim_unitary(lambda_prime, d)),
        big(dim_sym(lambda_prime)),
    )
}

/// Weight of every `λ'` in `S̄_n[tr_{[k]}P_λ ⊗ π_{[k]}]`. With `normalized`
/// the input is `π_λ` and the weights form a probability distribution.
pub fn twirl_spectrum(
    lambda: &YoungFrame,
    k: usize,
    d: usize,
    normalized: bool,
) -> Result<SpectralTable> {
    let lambda = lambda.with_d(d)?;
    check_split(&lambda, k)?;
    let n = lambda.n();
    let branching = partial_trace_decomposition(&lambda, k)?;
    let gammas = frames_of(d, k);
    let mus = branching.mu_coefficients();
    let mut scale = BigRational::new(BigInt::one(), BigInt::from(d).pow(k as u32));
    if normalized {
        scale /= int(big(dim_sym(&lambda)) * big(dim_unitary(&lambda, d)));
    }
    let entries = frames_of(d, n)
        .into_iter()
        .map(|lp| {
            let mut acc = ExactScalar::zero();
            for (mu, coeff) in &mus {
                let a: ExactScalar = gammas.iter().map(|g| alpha(&lp, mu, g, d)).sum();
                if !a.is_zero() {
                    acc += coeff * a;
                }
            }
            let w = acc * int(dim_sym(&lp)) * &scale;
            (lp, w)
        })
        .collect();
    Ok(SpectralTable { n, d, entries })
}

/// [`twirl_spectrum`] for every `k = 0..=n`.
pub fn twirl_spectra(
    lambda: &YoungFrame,
    d: usize,
    normalized: bool,
) -> Result<Vec<SpectralTable>> {
    (0..=lambda.n())
        .map(|k| twirl_spectrum(lambda, k, d, normalized))
        .collect()
}

/// `Σ_k C(n,k) q^k (1−q)^{n−k} · tables[k]`.
pub fn mix_spectra(tables: &[SpectralTable], q: &ExactScalar) -> Result<SpectralTable> {
    check_probability(q)?;
    let first = tables
        .first()
        .ok_or_else(|| Error::SizeMismatch("no twirl spectra to mix".into()))?;
    let (d, n) = (first.d, first.n);
    if tables.len() != n + 1 {
        return Err(Error::SizeMismatch(format!(
            "expected {} twirl spectra, got {}",
            n + 1,
            tables.len()
        )));
    }
    let weighted: Vec<_> = tables
        .iter()
        .enumerate()
        .map(|(k, t)| (binomial_weight(n, k, q), t))
        .collect();
    Ok(SpectralTable::scaled_sum(&weighted, d, n))
}

fn check_probability(q: &ExactScalar) -> Result<()> {
    if q.is_negative() || *q > ExactScalar::one() {
        return Err(Error::Domain {
            value: q.to_string(),
            domain: "[0, 1]",
        });
    }
    Ok(())
}

/// `Pr[λ'] = tr{P_λ' · N_q^{⊗n}(π_λ)}` for every `λ'`.
pub fn channel_output_spectrum(
    lambda: &YoungFrame,
    q: &ExactScalar,
    d: usize,
) -> Result<SpectralTable> {
    check_probability(q)?;
    mix_spectra(&twirl_spectra(lambda, d, true)?, q)
}

/// Same as [`channel_output_spectrum`] with `P_λ` as input instead of `π_λ`.
pub fn channel_output_overlaps(
    lambda: &YoungFrame,
    q: &ExactScalar,
    d: usize,
) -> Result<SpectralTable> {
    check_probability(q)?;
    mix_spectra(&twirl_spectra(lambda, d, false)?, q)
}

/// `Δ(n) = log₂(n+1)/n`.
pub fn delta(n: usize) -> f64 {
    ((n + 1) as f64).log2() / n as f64
}

/// `log₂` of [`theorem2_bound`].
pub fn theorem2_log2_bound(
    lambda: &YoungFrame,
    lambda_prime: &YoungFrame,
    q: f64,
    n: usize,
) -> Result<f64> {
    if lambda.n() != n || lambda_prime.n() != n || n == 0 {
        return Err(Error::SizeMismatch(format!(
            "frames {lambda} and {lambda_prime} are not both of size n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain {
            value: q.to_string(),
            domain: "[0, 1]",
        });
    }
    let ratio = lambda.row(0).abs_diff(lambda_prime.row(0)) as f64 / n as f64;
    if ratio < q {
        return Err(Error::BoundVacuous { ratio, q });
    }
    let gap = ratio - q;
    Ok(-(n as f64) * ((2.0 / std::f64::consts::LN_2) * gap * gap - delta(n)))
}

/// `2^{−n((2/ln 2)(|λ₁ − λ'₁|/n − q)² − Δ(n))}`, an upper bound on
/// `Pr[λ']` for input `π_λ` when `|λ₁ − λ'₁|/n ≥ q`, `d = 2`.
pub fn theorem2_bound(
    lambda: &YoungFrame,
    lambda_prime: &YoungFrame,
    q: f64,
    n: usize,
) -> Result<f64> {
    theorem2_log2_bound(lambda, lambda_prime, q, n).map(f64::exp2)
}

/// [`theorem2_bound`] scaled by `tr P_λ`, for input `P_λ`.
pub fn theorem2_bound_unnormalized(
    lambda: &YoungFrame,
    lambda_prime: &YoungFrame,
    q: f64,
    n: usize,
) -> Result<f64> {
    let trace = dim_sym(lambda) as f64 * dim_unitary(lambda, lambda.d()) as f64;
    Ok(trace * theorem2_bound(lambda, lambda_prime, q, n)?)
}

/// A feasible triple `(μ, ν, γ)` for the dimension-product optimization.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct XyWitness {
    pub mu: YoungFrame,
    pub nu: YoungFrame,
    pub gamma: YoungFrame,
}

/// `X` (max) and `Y` (min) of `dim F_ν · dim F_μ · dim F_γ` over triples with
/// `c^λ_{μν} · c^{λ'}_{μγ} ≠ 0`; both zero when there are none.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct XyResult {
    pub x: u128,
    pub y: u128,
    pub argmax: Option<XyWitness>,
    pub argmin: Option<XyWitness>,
}

impl XyResult {
    pub fn is_empty(&self) -> bool {
        self.argmax.is_none()
    }
}

/// Exhaustive search over `μ ∈ YF_{d,l}`, `ν, γ ∈ YF_{d,k}`. Witnesses are
/// the first optimal triples in enumeration order.
pub fn xy_optimize(
    lambda: &YoungFrame,
    lambda_prime: &YoungFrame,
    l: usize,
    k: usize,
    d: usize,
) -> Result<XyResult> {
    if l + k != lambda.n() || lambda.n() != lambda_prime.n() {
        return Err(Error::SizeMismatch(format!(
            "split {l} + {k} does not match |λ| = {} and |λ'| = {}",
            lambda.n(),
            lambda_prime.n()
        )));
    }
    let lambda = lambda.with_d(d)?;
    let lambda_prime = lambda_prime.with_d(d)?;
    let tails = frames_of(d, k);
    let mut result = XyResult {
        x: 0,
        y: 0,
        argmax: None,
        argmin: None,
    };
    for mu in frames_of(d, l) {
        let nus: Vec<_> = tails
            .iter()
            .filter(|nu| lr_coefficient(&lambda, &mu, *nu) > 0)
            .collect();
        if nus.is_empty() {
            continue;
        }
        let gammas: Vec<_> = tails
            .iter()
            .filter(|g| lr_coefficient(&lambda_prime, &mu, *g) > 0)
            .collect();
        for nu in &nus {
            for gamma in &gammas {
                let product = dim_sym(*nu) as u128 * dim_sym(&mu) as u128 * dim_sym(*gamma) as u128;
                let witness = || XyWitness {
                    mu: mu.clone(),
                    nu: (*nu).clone(),
                    gamma: (*gamma).clone(),
                };
                if result.argmax.is_none() || product > result.x {
                    result.x = product;
                    result.argmax = Some(witness());
                }
                if result.argmin.is_none() || product < result.y {
                    result.y = product;
                    result.argmin = Some(witness());
                }
            }
        }
    }
    Ok(result)
}

/// Outcome of comparing `X_{(n),λ'}` with `2^{k·h(λ'₂/k)}`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LemmaCheck {
    pub x: u128,
    /// `None` when `λ'₂ > k`, where `X` must vanish instead.
    pub bound: Option<f64>,
    pub holds: bool,
}

/// Relative slack on the float side of `X ≤ 2^{k·h(λ'₂/k)}`.
pub const LEMMA_SLACK: f64 = 1e-12;

/// Checks the entropy bound on `X` for `λ = (n, 0)`, `d = 2`, split
/// `l = n − k`.
pub fn lemma_bound_check(lambda_prime: &YoungFrame, k: usize) -> Result<LemmaCheck> {
    let lambda_prime = lambda_prime.with_d(2)?;
    let n = lambda_prime.n();
    if k > n {
        return Err(Error::SizeMismatch(format!(
            "cannot trace {k} of {n} sites"
        )));
    }
    let lambda = YoungFrame::single_row(n, 2)?;
    let x = xy_optimize(&lambda, &lambda_prime, n - k, k, 2)?.x;
    let second = lambda_prime.row(1);
    if second > k {
        return Ok(LemmaCheck {
            x,
            bound: None,
            holds: x == 0,
        });
    }
    let bound = if k == 0 {
        1.0
    } else {
        (k as f64 * binary_entropy(second as f64 / k as f64)?).exp2()
    };
    Ok(LemmaCheck {
        x,
        bound: Some(bound),
        holds: x as f64 <= bound * (1.0 + LEMMA_SLACK),
    })
}

/// Frames in the support of the `k`-site twirl spectrum that drop out at
/// `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SupportGrowth {
    pub k: usize,
    pub lost: Vec<YoungFrame>,
}

/// Compares consecutive supports of [`twirl_spectrum`]; only meant as a
/// report, shrinking supports are listed rather than rejected.
pub fn support_growth(lambda: &YoungFrame, d: usize) -> Result<Vec<SupportGrowth>> {
    let tables = twirl_spectra(lambda, d, true)?;
    Ok(tables
        .windows(2)
        .enumerate()
        .map(|(k, pair)| {
            let next = pair[1].support();
            let lost = pair[0]
                .support()
                .into_iter()
                .filter(|f| !next.contains(f))
                .cloned()
                .collect();
            SupportGrowth { k, lost }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn f(rows: &[usize], d: usize) -> YoungFrame {
        YoungFrame::new(rows, d).unwrap()
    }

    #[test]
    fn branching_examples() {
        let t = partial_trace_decomposition(&f(&[2], 2), 1).unwrap();
        assert_eq!(t.entries(), &[((f(&[1], 2), f(&[1], 2)), ratio(3, 2))]);
        let t = partial_trace_decomposition(&f(&[4, 0], 2), 1).unwrap();
        assert_eq!(t.entries(), &[((f(&[3], 2), f(&[1], 2)), ratio(5, 4))]);
        let lambda = f(&[2, 1], 3);
        let t = partial_trace_decomposition(&lambda, 0).unwrap();
        assert_eq!(t.entries(), &[((lambda.clone(), f(&[], 3)), int(1))]);
        assert_eq!(t.split(), (3, 0));
        assert!(partial_trace_decomposition(&lambda, 4).is_err());
    }

    #[test]
    fn branching_preserves_trace() {
        for d in 2..=3 {
            for n in 1..=5 {
                for lambda in frames_of(d, n) {
                    let trace = int(dim_sym(&lambda) * dim_unitary(&lambda, d));
                    for k in 0..=n {
                        let t = partial_trace_decomposition(&lambda, k).unwrap();
                        let reduced: ExactScalar = t
                            .mu_coefficients()
                            .iter()
                            .map(|(mu, c)| c * int(dim_sym(mu) * dim_unitary(mu, d)))
                            .sum();
                        assert_eq!(reduced, trace, "λ={lambda} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let one = f(&[1], 2);
        assert_eq!(alpha(&f(&[2], 2), &one, &one, 2), int(3));
        assert_eq!(alpha(&f(&[1, 1], 2), &one, &one, 2), int(1));
        assert!(alpha(&f(&[2, 2], 2), &f(&[2], 2), &f(&[1, 1], 2), 2).is_zero());
        assert!(alpha(&f(&[3], 2), &one, &one, 2).is_zero());
    }

    #[test]
    fn twirl_spectrum_examples() {
        let t = twirl_spectrum(&f(&[2], 2), 1, 2, true).unwrap();
        assert_eq!(t.get(&f(&[2], 2)), ratio(3, 4));
        assert_eq!(t.get(&f(&[1, 1], 2)), ratio(1, 4));
        let lambda = f(&[4, 0], 2);
        let zero = twirl_spectrum(&lambda, 0, 2, true).unwrap();
        assert_eq!(zero.support(), vec![&lambda]);
        assert_eq!(zero.get(&lambda), int(1));
        let one = twirl_spectrum(&lambda, 1, 2, true).unwrap();
        assert_eq!(one.support(), vec![&lambda, &f(&[3, 1], 2)]);
        assert_eq!(one.total(), int(1));
        let raw = twirl_spectrum(&lambda, 1, 2, false).unwrap();
        assert_eq!(raw.total(), int(5));
    }

    #[test]
    fn channel_spectrum_endpoints() {
        let lambda = f(&[4, 0], 2);
        let id = channel_output_spectrum(&lambda, &int(0), 2).unwrap();
        assert_eq!(id.support(), vec![&lambda]);
        for (d, n) in [(2, 4), (3, 3)] {
            let lambda = YoungFrame::single_row(n, d).unwrap();
            let full = channel_output_spectrum(&lambda, &int(1), d).unwrap();
            for (lp, w) in full.entries() {
                let expected = ratio(dim_sym(lp) * dim_unitary(lp, d), (d as u64).pow(n as u32));
                assert_eq!(*w, expected);
            }
        }
        let half = channel_output_spectrum(&f(&[2, 1, 1], 3), &ratio(1, 3), 3).unwrap();
        assert_eq!(half.total(), int(1));
        assert!(channel_output_spectrum(&lambda, &ratio(5, 4), 2).is_err());
        assert_eq!(half.mode(), Some(&f(&[2, 1, 1], 3)));
    }

    #[test]
    fn bound_examples() {
        let l = f(&[8, 0], 2);
        let lp = f(&[4, 4], 2);
        let log = theorem2_log2_bound(&l, &lp, 0.25, 8).unwrap();
        let expected = -8.0 * ((2.0 / std::f64::consts::LN_2) / 16.0 - delta(8));
        assert!((log - expected).abs() < 1e-12);
        let edge = theorem2_bound(&l, &f(&[6, 2], 2), 0.25, 8).unwrap();
        assert!((edge - 9.0).abs() < 1e-9);
        assert!(matches!(
            theorem2_bound(&l, &f(&[7, 1], 2), 0.25, 8),
            Err(Error::BoundVacuous { .. })
        ));
        let measured = channel_output_spectrum(&l, &ratio(1, 4), 2)
            .unwrap()
            .get(&lp);
        assert!(crate::rational::to_f64(&measured) <= theorem2_bound(&l, &lp, 0.25, 8).unwrap());
    }

    #[test]
    fn xy_examples() {
        for n in 1..=5 {
            let row = YoungFrame::single_row(n, 2).unwrap();
            for k in 0..=n {
                let r = xy_optimize(&row, &row, n - k, k, 2).unwrap();
                assert_eq!((r.x, r.y), (1, 1));
            }
        }
        let r = xy_optimize(&f(&[4, 0], 2), &f(&[3, 1], 2), 2, 2, 2).unwrap();
        assert_eq!(r.x, 1);
        let w = r.argmax.unwrap();
        assert_eq!((w.mu, w.nu), (f(&[2], 2), f(&[2], 2)));
        let empty = xy_optimize(&f(&[4, 0], 2), &f(&[2, 2], 2), 3, 1, 2).unwrap();
        assert!(empty.is_empty());
        assert_eq!((empty.x, empty.y), (0, 0));
    }

    #[test]
    fn lemma_examples() {
        let c = lemma_bound_check(&f(&[4, 0], 2), 2).unwrap();
        assert_eq!(c.bound, Some(1.0));
        assert!(c.holds && c.x <= 1);
        let c = lemma_bound_check(&f(&[3, 1], 2), 2).unwrap();
        assert_eq!(c.bound, Some(4.0));
        assert_eq!(c.x, 1);
        assert!(c.holds);
        let c = lemma_bound_check(&f(&[2, 2], 2), 1).unwrap();
        assert_eq!((c.x, c.bound, c.holds), (0, None, true));
    }

    #[test]
    fn support_growth_is_a_report() {
        let report = support_growth(&f(&[4, 0], 2), 2).unwrap();
        assert_eq!(report.len(), 4);
        assert!(report.iter().all(|g| g.lost.is_empty()));
    }
}
