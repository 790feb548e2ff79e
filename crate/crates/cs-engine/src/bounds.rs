use interface_analysis::{InterfaceAnalysis, Regime};

/// Interval the leakage after `n` uses is expected to lie in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsBounds {
    pub regime: Regime,
    pub lower: f64,
    pub upper: f64,
}

impl CsBounds {
    pub fn contains(&self, xi: f64, tol: f64) -> bool {
        xi >= self.lower - tol && xi <= self.upper + tol
    }
}

/// Decay factor per pair of uses in the slow regimes:
/// `β² + (1−β²)|⟨ψ0|φ⟩|²` for B1 and `ω² + (1−ω²)|⟨ψ0|φ⟩|²` for B2.
fn pair_factor(u: &InterfaceAnalysis, regime: Regime) -> Option<f64> {
    let o2 = u.overlap_psi0_phi.norm_sqr();
    match regime {
        Regime::B1 => Some(u.beta * u.beta + (1.0 - u.beta * u.beta) * o2),
        Regime::B2 => Some(u.omega * u.omega + (1.0 - u.omega * u.omega) * o2),
        _ => None,
    }
}

/// Regime-dependent bounds on `ξ` after `n ≥ 2` uses. The slow regimes use
/// the exponent `(n−2)/4`; [`effective_exponent`] measures how far a given
/// trace actually gets. Non-exploitable unitaries get the trivial interval
/// `[0, 1]`.
pub fn cs_bounds(u: &InterfaceAnalysis, n: usize) -> CsBounds {
    let regime = u.regime();
    let (b, w) = (u.beta, u.omega);
    let nf = n as f64;
    let m = nf - 2.0;
    let (lower, upper) = match regime {
        Regime::A => {
            let x = b.powf(nf);
            (x, x)
        }
        Regime::B0 => {
            let x = b.powf(nf);
            let y = b * b * w.powf(m);
            (x.min(y), x.max(y))
        }
        Regime::B1 => {
            let c = pair_factor(u, regime).expect("slow regime");
            (b.powf(nf), b * b * c.powf(m / 4.0))
        }
        Regime::B2 => {
            let c = pair_factor(u, regime).expect("slow regime");
            (w.powf(m), c.powf(m / 4.0))
        }
        Regime::NotExploitable => (0.0, 1.0),
    };
    CsBounds { regime, lower, upper }
}

/// Smallest `e` with `ξ^(n) ≤ ξ^(2)·c^{e(n−2)}` over the given trace, where
/// `xis[j]` is the leakage after `j + 2` uses and `c` is the slow-regime
/// decay factor. The `(n−2)/4` bounds of [`cs_bounds`] hold exactly when
/// this is at least `1/4`. `None` outside B1 and B2, or for traces shorter
/// than three uses.
pub fn effective_exponent(u: &InterfaceAnalysis, xis: &[f64]) -> Option<f64> {
    let c = decay_factor(u)?;
    if xis.len() < 2 || c <= 0.0 || c >= 1.0 || xis[0] <= 0.0 {
        return None;
    }
    xis.iter()
        .enumerate()
        .skip(1)
        .map(|(j, &xi)| (xi / xis[0]).ln() / (j as f64 * c.ln()))
        .min_by(f64::total_cmp)
}

/// The two-use decay factor `c` of the slow regimes, `None` elsewhere.
pub fn decay_factor(u: &InterfaceAnalysis) -> Option<f64> {
    pair_factor(u, u.regime())
}
