use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amplitudes::AmplitudeVector;
use crate::bounds::{DecayKind, DecayModel};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignPattern {
    Positive,
    #[default]
    Alternating,
    /// Independent fair signs drawn from the spec seed.
    Random,
}

impl std::str::FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(SignPattern::Positive),
            "alternating" => Ok(SignPattern::Alternating),
            "random" => Ok(SignPattern::Random),
            other => Err(Error::Parse(format!("unknown sign pattern {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticSpec<T> {
    pub kind: DecayKind,
    pub rate: T,
    pub dim: usize,
    pub seed: u64,
    pub signs: SignPattern,
}

impl<T: Real> SyntheticSpec<T> {
    pub fn new(kind: DecayKind, rate: T, dim: usize) -> Self {
        Self { kind, rate, dim, seed: 0, signs: SignPattern::default() }
    }

    pub fn n_qubits(&self) -> u32 {
        self.dim.max(2).next_power_of_two().trailing_zeros()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Domain { name: "dim", value: self.dim as f64, domain: ">= 2" });
        }
        DecayModel::new(self.kind, self.rate, self.dim).map(|_| ())
    }
}

/// State whose `k`-th basis amplitude has magnitude `r^{k−1}` or `k^{−r}`.
pub fn synthetic_state<T: Real>(spec: &SyntheticSpec<T>) -> Result<AmplitudeVector<T>> {
    spec.validate()?;
    let model = DecayModel::new(spec.kind, spec.rate, spec.dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let raw: Vec<T> = (1..=spec.dim)
        .map(|k| {
            let negative = match spec.signs {
                SignPattern::Positive => false,
                SignPattern::Alternating => k % 2 == 0,
                SignPattern::Random => rng.gen_bool(0.5),
            };
            let m = model.term(k);
            if negative {
                -m
            } else {
                m
            }
        })
        .collect();
    let label = format!("synthetic:{}:r={}:dim={}", spec.kind.as_str(), spec.rate, spec.dim);
    AmplitudeVector::normalize(&raw, spec.n_qubits(), label)
}
