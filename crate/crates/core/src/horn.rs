//! Horn inequalities for spectra of sums of Hermitian matrices, feasibility
//! via LR positivity, and the support window for partially depolarised
//! isotypical projectors.

use crate::error::{Error, Result};
use crate::frames::{frames_of, Shape, YoungFrame};
use crate::lr::lr_coefficient;

/// Spectra `λ`, `μ`, `ν` of `C = A + B`, `A`, `B`, all padded to `d` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornTriple {
    lambda: YoungFrame,
    mu: YoungFrame,
    nu: YoungFrame,
}

impl HornTriple {
    /// Pads all three frames to the largest row budget among them.
    pub fn new(lambda: &YoungFrame, mu: &YoungFrame, nu: &YoungFrame) -> Result<Self> {
        let d = lambda.d().max(mu.d()).max(nu.d());
        Ok(HornTriple {
            lambda: lambda.with_d(d)?,
            mu: mu.with_d(d)?,
            nu: nu.with_d(d)?,
        })
    }

    pub fn d(&self) -> usize {
        self.lambda.d()
    }

    pub fn lambda(&self) -> &YoungFrame {
        &self.lambda
    }

    pub fn mu(&self) -> &YoungFrame {
        &self.mu
    }

    pub fn nu(&self) -> &YoungFrame {
        &self.nu
    }
}

/// Trace condition plus `λ_{i+j−1} ≤ μ_i + ν_j` for all `i + j − 1 ≤ d`.
pub fn basic_horn_holds(t: &HornTriple) -> bool {
    if t.lambda.n() != t.mu.n() + t.nu.n() {
        return false;
    }
    let d = t.d();
    (0..d).all(|i| (0..d - i).all(|j| t.lambda.row(i + j) <= t.mu.row(i) + t.nu.row(j)))
}

/// Exact feasibility for integer spectra: `c^λ_{μν} > 0`.
pub fn horn_feasible(t: &HornTriple) -> bool {
    lr_coefficient(&t.lambda, &t.mu, &t.nu) > 0
}

/// The set of `λ'` with `|λ_m − λ'_m| ≤ (d−1)·k` for every row `m`; outside
/// of it the overlap with a `k`-site partially traced `P_λ` vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportWindow {
    lambda: YoungFrame,
    k: usize,
}

impl SupportWindow {
    pub fn lambda(&self) -> &YoungFrame {
        &self.lambda
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        (self.lambda.d() - 1) * self.k
    }

    pub fn contains(&self, lambda_prime: &YoungFrame) -> bool {
        let width = self.width();
        (0..self.lambda.d()).all(|m| self.lambda.row(m).abs_diff(lambda_prime.row(m)) <= width)
    }
}

pub fn support_window(lambda: &YoungFrame, d: usize, k: usize) -> Result<SupportWindow> {
    if k > lambda.n() {
        return Err(Error::SizeMismatch(format!(
            "cannot trace {k} of {} sites",
            lambda.n()
        )));
    }
    Ok(SupportWindow {
        lambda: lambda.with_d(d)?,
        k,
    })
}

/// `true` iff no `μ ∈ YF_{d,l}`, `ν, γ ∈ YF_{d,k}` has
/// `c^λ_{μν} · c^{λ'}_{μγ} ≠ 0`.
pub fn theorem1_chain_check(
    lambda: &YoungFrame,
    lambda_prime: &YoungFrame,
    l: usize,
    k: usize,
    d: usize,
) -> Result<bool> {
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
    let connected = frames_of(d, l).iter().any(|mu| {
        tails.iter().any(|nu| lr_coefficient(&lambda, mu, nu) > 0)
            && tails
                .iter()
                .any(|gamma| lr_coefficient(&lambda_prime, mu, gamma) > 0)
    });
    Ok(!connected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(rows: &[usize], d: usize) -> YoungFrame {
        YoungFrame::new(rows, d).unwrap()
    }

    fn triple(l: &[usize], m: &[usize], n: &[usize]) -> HornTriple {
        HornTriple::new(&f(l, 2), &f(m, 2), &f(n, 2)).unwrap()
    }

    #[test]
    fn basic_horn_examples() {
        assert!(basic_horn_holds(&triple(&[2, 0], &[1, 0], &[1, 0])));
        assert!(!basic_horn_holds(&triple(&[2, 2], &[2, 0], &[1, 1])));
        assert!(!basic_horn_holds(&triple(&[3, 0], &[1, 0], &[1, 0])));
    }

    #[test]
    fn feasibility_examples() {
        assert!(horn_feasible(&triple(&[2, 0], &[1, 0], &[1, 0])));
        assert!(!horn_feasible(&triple(&[2, 2], &[2, 0], &[1, 1])));
        assert!(horn_feasible(&triple(&[2, 1], &[1, 0], &[1, 1])));
    }

    #[test]
    fn triples_are_padded_to_common_budget() {
        let t = HornTriple::new(&f(&[2, 1], 3), &f(&[1], 1), &f(&[1, 1], 2)).unwrap();
        assert_eq!(t.d(), 3);
        assert_eq!(t.mu().rows(), &[1, 0, 0]);
    }

    #[test]
    fn window_examples() {
        let lambda = f(&[4, 0], 2);
        let zero = support_window(&lambda, 2, 0).unwrap();
        for lp in frames_of(2, 4) {
            assert_eq!(zero.contains(&lp), lp == lambda);
        }
        let one = support_window(&lambda, 2, 1).unwrap();
        assert!(one.contains(&f(&[3, 1], 2)));
        assert!(!one.contains(&f(&[2, 2], 2)));
        let w = support_window(&f(&[6, 3, 0], 3), 3, 1).unwrap();
        assert!(w.contains(&f(&[4, 4, 1], 3)));
        assert!(support_window(&lambda, 2, 5).is_err());
    }

    #[test]
    fn chain_check_examples() {
        let lambda = f(&[4, 0], 2);
        assert!(theorem1_chain_check(&lambda, &f(&[2, 2], 2), 3, 1, 2).unwrap());
        assert!(!theorem1_chain_check(&lambda, &f(&[3, 1], 2), 3, 1, 2).unwrap());
        for lp in frames_of(2, 4) {
            for l in 0..=4 {
                assert!(!theorem1_chain_check(&lp, &lp, l, 4 - l, 2).unwrap());
            }
        }
        assert!(theorem1_chain_check(&lambda, &lambda, 3, 2, 2).is_err());
    }
}
