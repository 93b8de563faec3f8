use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Theorem1Divides,
    Theorem1Coprime,
    Atkin,
    Eisenstein,
    Prop31,
    Lemma41,
    Welldefined,
    SanityIntegrality,
    Surjectivity,
    Oracles,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Theorem1Divides,
        CheckKind::Theorem1Coprime,
        CheckKind::Atkin,
        CheckKind::Eisenstein,
        CheckKind::Prop31,
        CheckKind::Lemma41,
        CheckKind::Welldefined,
        CheckKind::SanityIntegrality,
        CheckKind::Surjectivity,
        CheckKind::Oracles,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Theorem1Divides => "theorem1-divides",
            CheckKind::Theorem1Coprime => "theorem1-coprime",
            CheckKind::Atkin => "atkin",
            CheckKind::Eisenstein => "eisenstein",
            CheckKind::Prop31 => "prop31",
            CheckKind::Lemma41 => "lemma41",
            CheckKind::Welldefined => "welldefined",
            CheckKind::SanityIntegrality => "sanity-integrality",
            CheckKind::Surjectivity => "surjectivity",
            CheckKind::Oracles => "oracles",
        }
    }

    /// The statement a check certifies, as printed in summaries.
    pub fn statement(&self) -> &'static str {
        match self {
            CheckKind::Theorem1Divides => "Norm . varpi_Mp = varpi_M . pi_1 on a kernel orbit of cusps (p | M)",
            CheckKind::Theorem1Coprime => {
                "Norm . varpi_Mp = varpi_M . (pi_1 - <p> pi_2) on a kernel orbit of cusps (p not dividing M)"
            }
            CheckKind::Atkin => "varpi_M is annihilated by U_l - 1 on H_1(X_1(M), Z) with 6 inverted",
            CheckKind::Eisenstein => "varpi_M is annihilated by T_l - l<l> - 1 on H_1(X_1(M), C_inf, Z)",
            CheckKind::Prop31 => "Z[G x Gamma_0]/I is free of rank rank H_1 + #G - 1 and surjects onto H_1(X_1(M), C_0, Z)",
            CheckKind::Lemma41 => "alpha_* del Theta(g) = del Theta(phi_p(g)) and the cocycle identity for del Theta",
            CheckKind::Welldefined => "varpi_M factors through the Manin map on S_M^0",
            CheckKind::SanityIntegrality => "Sharifi symbols have trivial tame symbols away from the level",
            CheckKind::Surjectivity => "pi_1 - <p> pi_2 is surjective modulo p on absolute homology",
            CheckKind::Oracles => "homology rank equals twice the genus and cusp counts agree",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown check kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Tame,
    Presented,
    Both,
}

impl Backend {
    pub fn tame(&self) -> bool {
        matches!(self, Backend::Tame | Backend::Both)
    }

    pub fn presented(&self) -> bool {
        matches!(self, Backend::Presented | Backend::Both)
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tame" => Ok(Backend::Tame),
            "presented" => Ok(Backend::Presented),
            "both" => Ok(Backend::Both),
            _ => Err(Error::InvalidParameters(format!("unknown backend {s:?}"))),
        }
    }
}

/// Which kernel orbits of cusps a norm check runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CuspMode {
    /// Every kernel orbit contained in `C^0`.
    Orbit,
    /// The kernel orbit of infinity.
    Infty,
}

impl FromStr for CuspMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orbit" => Ok(CuspMode::Orbit),
            "infty" | "inf" => Ok(CuspMode::Infty),
            _ => Err(Error::InvalidCuspSubset(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub kind: CheckKind,
    pub level: u64,
    pub p: Option<u64>,
    pub ell: Option<u64>,
    pub cusps: CuspMode,
    pub trials: usize,
    pub seed: u64,
    pub backend: Backend,
}

pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_SEED: u64 = 0;
const EISENSTEIN_PRIMES: [u64; 4] = [2, 3, 5, 7];

impl CheckSpec {
    pub fn new(kind: CheckKind, level: u64) -> Self {
        CheckSpec {
            kind,
            level,
            p: None,
            ell: None,
            cusps: CuspMode::Orbit,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            backend: Backend::Tame,
        }
    }

    pub fn with_p(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_ell(mut self, ell: u64) -> Self {
        self.ell = Some(ell);
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_cusps(mut self, cusps: CuspMode) -> Self {
        self.cusps = cusps;
        self
    }

    pub fn with_trials(mut self, trials: usize, seed: u64) -> Self {
        self.trials = trials;
        self.seed = seed;
        self
    }

    fn require_p(&self) -> Result<u64> {
        let p = self.p.ok_or_else(|| Error::InvalidParameters(format!("{} needs --p", self.kind)))?;
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(p)
    }

    /// Checks parameter validity for the kind.
    pub fn validate(&self) -> Result<()> {
        let m = self.level;
        let min = match self.kind {
            CheckKind::Lemma41 => 1,
            _ => 4,
        };
        if m < min {
            return Err(Error::InvalidLevel { level: m, reason: "level too small for this check" });
        }
        match self.kind {
            CheckKind::Theorem1Divides => {
                let p = self.require_p()?;
                if !m.is_multiple_of(p) {
                    return Err(Error::PrimeNotDividing { ell: p, level: m });
                }
            }
            CheckKind::Theorem1Coprime | CheckKind::Surjectivity => {
                let p = self.require_p()?;
                if m.is_multiple_of(p) {
                    return Err(Error::InvalidParameters(format!("{p} divides {m}")));
                }
            }
            CheckKind::Lemma41 => {
                self.require_p()?;
            }
            CheckKind::Atkin => {
                if let Some(l) = self.ell {
                    if !arith::is_prime(l) {
                        return Err(Error::NotPrime(l));
                    }
                    if !m.is_multiple_of(l) {
                        return Err(Error::PrimeNotDividing { ell: l, level: m });
                    }
                }
            }
            CheckKind::Eisenstein => {
                if let Some(l) = self.ell {
                    if !arith::is_prime(l) {
                        return Err(Error::NotPrime(l));
                    }
                    if m.is_multiple_of(l) {
                        return Err(Error::InvalidParameters(format!("{l} divides {m}")));
                    }
                }
            }
            CheckKind::Prop31 | CheckKind::Welldefined | CheckKind::SanityIntegrality | CheckKind::Oracles => {}
        }
        Ok(())
    }

    /// Primes `l` the check runs over.
    pub fn ells(&self) -> Vec<u64> {
        if let Some(l) = self.ell {
            return vec![l];
        }
        match self.kind {
            CheckKind::Atkin => arith::prime_divisors(self.level),
            CheckKind::Eisenstein => EISENSTEIN_PRIMES.into_iter().filter(|l| !self.level.is_multiple_of(*l)).collect(),
            _ => Vec::new(),
        }
    }
}

/// The standard suite: every check kind at the levels it is certified for.
pub fn default_suite(backend: Backend, seed: u64) -> Vec<CheckSpec> {
    use CheckKind::*;
    let mut v = Vec::new();
    for m in 4..=16 {
        v.push(CheckSpec::new(Welldefined, m).with_backend(Backend::Both));
    }
    for (m, p) in [(4, 2), (8, 2), (9, 3)] {
        v.push(CheckSpec::new(Theorem1Divides, m).with_p(p).with_backend(backend));
    }
    for (m, p) in [(4, 3), (5, 2), (7, 2)] {
        v.push(CheckSpec::new(Theorem1Coprime, m).with_p(p).with_backend(backend));
    }
    for m in [11, 14, 15] {
        v.push(CheckSpec::new(Atkin, m).with_backend(backend));
    }
    for m in [11, 13] {
        v.push(CheckSpec::new(Eisenstein, m).with_backend(backend));
    }
    for (m, p) in [(4, 2), (4, 3), (6, 5)] {
        v.push(CheckSpec::new(Lemma41, m).with_p(p).with_trials(DEFAULT_TRIALS, seed));
    }
    for m in 5..=16 {
        v.push(CheckSpec::new(Prop31, m));
    }
    for p in [2, 3] {
        v.push(CheckSpec::new(Surjectivity, 11).with_p(p));
    }
    for m in [5, 7, 11] {
        v.push(CheckSpec::new(SanityIntegrality, m));
    }
    for m in 4..=30 {
        v.push(CheckSpec::new(Oracles, m));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
        }
        assert!("theorem2".parse::<CheckKind>().is_err());
    }

    #[test]
    fn validation() {
        assert!(CheckSpec::new(CheckKind::Theorem1Divides, 4).with_p(2).validate().is_ok());
        assert!(CheckSpec::new(CheckKind::Theorem1Divides, 4).with_p(3).validate().is_err());
        assert!(CheckSpec::new(CheckKind::Theorem1Divides, 4).validate().is_err());
        assert!(CheckSpec::new(CheckKind::Theorem1Coprime, 4).with_p(2).validate().is_err());
        assert!(CheckSpec::new(CheckKind::Theorem1Coprime, 4).with_p(4).validate().is_err());
        assert!(CheckSpec::new(CheckKind::Atkin, 11).with_ell(3).validate().is_err());
        assert!(CheckSpec::new(CheckKind::Eisenstein, 11).with_ell(11).validate().is_err());
        assert!(CheckSpec::new(CheckKind::Prop31, 3).validate().is_err());
    }

    #[test]
    fn default_suite_is_valid() {
        let suite = default_suite(Backend::Both, 0);
        assert!(suite.iter().all(|s| s.validate().is_ok()));
        for k in CheckKind::ALL {
            assert!(suite.iter().any(|s| s.kind == k), "{k}");
        }
    }

    #[test]
    fn default_primes() {
        assert_eq!(CheckSpec::new(CheckKind::Atkin, 15).ells(), vec![3, 5]);
        assert_eq!(CheckSpec::new(CheckKind::Eisenstein, 14).ells(), vec![3, 5]);
        assert_eq!(CheckSpec::new(CheckKind::Eisenstein, 11).with_ell(5).ells(), vec![5]);
    }
}
