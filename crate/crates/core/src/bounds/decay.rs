use crate::amplitudes::AmplitudeVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::series::zeta;

/// Fewest nonzero amplitudes accepted by [`fit_decay`].
pub const MIN_FIT_POINTS: usize = 8;

/// `c(r) = √((1+r)/(1−r))`, the ℓ1/ℓ2 ratio bound for a geometric tail.
pub fn geometric_constant<T: Real>(r: T) -> Result<T> {
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::Domain { name: "r", value: r.as_f64(), domain: "(0, 1)" });
    }
    Ok(((T::one() + r) / (T::one() - r)).sqrt())
}

/// `ζ(r)/√ζ(2r)`, the ℓ1/ℓ2 ratio of an infinite power-law tail.
pub fn power_law_constant<T: Real>(r: T) -> Result<T> {
    if !r.is_finite_value() {
        return Err(Error::Domain { name: "r", value: r.as_f64(), domain: "(1, inf)" });
    }
    if r <= T::one() {
        return Err(Error::L1Diverges(r.as_f64()));
    }
    Ok(zeta(r) / zeta(T::lit(2.0) * r).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayKind {
    /// `|α|_(k) = C r^{k−1}`.
    Geometric,
    /// `|α|_(k) = C k^{−r}`.
    PowerLaw,
}

impl DecayKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DecayKind::Geometric => "geometric",
            DecayKind::PowerLaw => "power_law",
        }
    }
}

impl std::str::FromStr for DecayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" | "exponential" => Ok(DecayKind::Geometric),
            "power_law" | "power-law" | "power" => Ok(DecayKind::PowerLaw),
            other => Err(Error::Parse(format!("unknown decay kind {other:?}"))),
        }
    }
}

/// Decay profile of the sorted amplitude magnitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayModel<T> {
    pub kind: DecayKind,
    pub rate: T,
    pub prefactor: T,
    /// Root-mean-square residual of the log-magnitude fit (zero for models
    /// specified directly).
    pub fit_residual: T,
    /// Number of basis states available, the largest admissible kept count.
    pub support: usize,
}

impl<T: Real> DecayModel<T> {
    pub fn new(kind: DecayKind, rate: T, support: usize) -> Result<Self> {
        let model = Self { kind, rate, prefactor: T::one(), fit_residual: T::zero(), support };
        model.validate()?;
        Ok(model)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rate;
        let ok = match self.kind {
            DecayKind::Geometric => r > T::zero() && r < T::one(),
            DecayKind::PowerLaw => r > T::lit(0.5) && r.is_finite_value(),
        };
        if !ok {
            let domain = match self.kind {
                DecayKind::Geometric => "(0, 1)",
                DecayKind::PowerLaw => "(1/2, inf)",
            };
            return Err(Error::Domain { name: "rate", value: r.as_f64(), domain });
        }
        if self.support == 0 {
            return Err(Error::Domain { name: "support", value: 0.0, domain: ">= 1" });
        }
        Ok(())
    }

    /// Unnormalized magnitude of rank `k ≥ 1`.
    pub fn term(&self, k: usize) -> T {
        let kk = T::from_count(k);
        match self.kind {
            DecayKind::Geometric => self.rate.powf(kk - T::one()),
            DecayKind::PowerLaw => kk.powf(-self.rate),
        }
    }
}

/// Least-squares line through `(x, y)`: returns (intercept, slope, rms residual).
fn line_fit<T: Real>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let n = T::from_count(xs.len());
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = if sxx > T::zero() { sxy / sxx } else { T::zero() };
    let intercept = my - slope * mx;
    let ss = xs
        .iter()
        .zip(ys)
        .fold(T::zero(), |a, (&x, &y)| a + (y - intercept - slope * x).powi(2));
    (intercept, slope, (ss / n).sqrt())
}

/// Fits geometric and power-law profiles to the sorted magnitudes of `psi`,
/// skipping the leading 10% of ranks, and returns the better one.
///
/// A flat profile yields a degenerate model (geometric rate 1) with
/// [`DecayModel::is_valid`] false rather than an error.
pub fn fit_decay<T: Real>(psi: &AmplitudeVector<T>) -> Result<DecayModel<T>> {
    let mags = psi.sorted_magnitudes();
    if mags.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { found: mags.len(), needed: MIN_FIT_POINTS });
    }
    let skip = mags.len() / 10;
    let ranks: Vec<usize> = (skip + 1..=mags.len()).collect();
    let ys: Vec<T> = ranks.iter().map(|&k| mags[k - 1].ln()).collect();

    let xs_geo: Vec<T> = ranks.iter().map(|&k| T::from_count(k - 1)).collect();
    let (ic_g, sl_g, res_g) = line_fit(&xs_geo, &ys);
    let xs_pow: Vec<T> = ranks.iter().map(|&k| T::from_count(k).ln()).collect();
    let (ic_p, sl_p, res_p) = line_fit(&xs_pow, &ys);

    let support = psi.dim();
    Ok(if res_g <= res_p {
        DecayModel {
            kind: DecayKind::Geometric,
            rate: sl_g.exp(),
            prefactor: ic_g.exp(),
            fit_residual: res_g,
            support,
        }
    } else {
        DecayModel {
            kind: DecayKind::PowerLaw,
            rate: -sl_p,
            prefactor: ic_p.exp(),
            fit_residual: res_p,
            support,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitudes::normalize;

    #[test]
    fn geometric_constant_values() {
        assert!((geometric_constant(0.5f64).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((geometric_constant(0.9f64).unwrap() - 19f64.sqrt()).abs() < 1e-14);
        assert!((geometric_constant(1e-12f64).unwrap() - 1.0).abs() < 1e-11);
        assert!(geometric_constant(0.0f64).is_err());
        assert!(geometric_constant(1.0f64).is_err());
    }

    #[test]
    fn power_law_constant_values() {
        // ζ(2)/√ζ(4) = (π²/6)/(π²/√90) = √10/2
        assert!((power_law_constant(2.0f64).unwrap() - 10f64.sqrt() / 2.0).abs() < 1e-13);
        assert!((power_law_constant(60.0f64).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(power_law_constant(1.0f64), Err(Error::L1Diverges(_))));
        assert!(matches!(power_law_constant(0.7f64), Err(Error::L1Diverges(_))));
    }

    #[test]
    fn power_law_constant_at_three_halves() {
        // Oracle: 10^7-term partial sums plus the integral of x^{-s} from N + 1/2.
        fn series(s: f64) -> f64 {
            let n = 10_000_000usize;
            let head: f64 = (1..=n).rev().map(|k| (k as f64).powf(-s)).sum();
            head + (n as f64 + 0.5).powf(1.0 - s) / (s - 1.0)
        }
        let oracle = series(1.5) / series(3.0).sqrt();
        let c = power_law_constant(1.5f64).unwrap();
        assert!((c - oracle).abs() < 1e-9, "{c} vs {oracle}");
    }

    fn synthetic(kind: DecayKind, rate: f64, dim: usize) -> AmplitudeVector<f64> {
        let raw: Vec<f64> = (1..=dim)
            .map(|k| match kind {
                DecayKind::Geometric => rate.powi(k as i32 - 1),
                DecayKind::PowerLaw => (k as f64).powf(-rate),
            })
            .collect();
        let n = dim.next_power_of_two().trailing_zeros().max(1);
        normalize(&raw, n).unwrap()
    }

    #[test]
    fn fit_recovers_geometric() {
        let m = fit_decay(&synthetic(DecayKind::Geometric, 0.8, 128)).unwrap();
        assert_eq!(m.kind, DecayKind::Geometric);
        assert!((m.rate - 0.8).abs() < 0.008);
        assert!(m.is_valid());
    }

    #[test]
    fn fit_recovers_power_law() {
        let m = fit_decay(&synthetic(DecayKind::PowerLaw, 2.0, 512)).unwrap();
        assert_eq!(m.kind, DecayKind::PowerLaw);
        assert!((m.rate - 2.0).abs() < 0.04);
    }

    #[test]
    fn flat_profile_is_degenerate() {
        let psi = normalize(&[1.0f64; 16], 4).unwrap();
        let m = fit_decay(&psi).unwrap();
        assert_eq!(m.kind, DecayKind::Geometric);
        assert!((m.rate - 1.0).abs() < 1e-12);
        assert!(!m.is_valid());
    }

    #[test]
    fn too_few_points() {
        let psi = normalize(&[1.0f64, 0.5, 0.25], 2).unwrap();
        assert!(matches!(fit_decay(&psi), Err(Error::InsufficientData { found: 3, .. })));
    }
}
