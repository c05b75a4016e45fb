use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::EntropyError;
use crate::coeff::Param;

/// The entropies this crate knows about.
///
/// Every parameter is a [`Param`], so exact expansion coefficients are
/// available whenever the parameters are rational literals.
#[derive(Debug, Clone, PartialEq)]
pub enum EntropyKind {
    /// `Σ p ln(1/p)`, group exponential `G(t) = t`.
    BoltzmannGibbs,
    /// `(Σ p^q − 1)/(1 − q)`, `G(t) = (e^{(1−q)t} − 1)/(1 − q)`.
    Tsallis { q: Param },
    /// `Σ p (p^{−κ} − p^{κ})/(2κ)`, `G(t) = sinh(κt)/κ`.
    Kaniadakis { kappa: Param },
    /// Generalized log `(x^a − x^b)/(a − b)`, `G(t) = (e^{at} − e^{bt})/(a − b)`.
    BorgesRoditi { a: Param, b: Param },
    /// Incomplete-gamma entropy with `c ∈ (0,1]` and integer `d`.
    Scd { c: Param, d: u32 },
    /// `G(t) = (1/σ) Σ_{n=l}^{m} k_n e^{nσt}`; `k` lists `k_l ..= k_m`.
    GroupEntropy { sigma: Param, l: i32, k: Vec<Param> },
    /// Third-order difference logarithm.
    SIII { q: Param },
    /// Fourth-order difference logarithm.
    SIV { q: Param },
    /// Three-parameter group entropy.
    SAlphaBetaQ { alpha: Param, beta: Param, q: Param },
    /// `Σ p (ln 1/p)^δ`.
    SDelta { delta: Param },
    /// `Σ p (ln_q 1/p)^δ`.
    SQDelta { q: Param, delta: Param },
    /// Arbitrary group exponential given by its `a`-sequence.
    Generic { a: Vec<Param> },
}

impl EntropyKind {
    pub fn name(&self) -> &'static str {
        match self {
            EntropyKind::BoltzmannGibbs => "bg",
            EntropyKind::Tsallis { .. } => "tsallis",
            EntropyKind::Kaniadakis { .. } => "kaniadakis",
            EntropyKind::BorgesRoditi { .. } => "borges_roditi",
            EntropyKind::Scd { .. } => "s_cd",
            EntropyKind::GroupEntropy { .. } => "group",
            EntropyKind::SIII { .. } => "s_iii",
            EntropyKind::SIV { .. } => "s_iv",
            EntropyKind::SAlphaBetaQ { .. } => "s_alpha_beta_q",
            EntropyKind::SDelta { .. } => "s_delta",
            EntropyKind::SQDelta { .. } => "s_q_delta",
            EntropyKind::Generic { .. } => "generic",
        }
    }

    /// Coefficients `k_n` of the generalized logarithm, for the kinds that are
    /// group entropies. Returns `(σ, l, [k_l, ..., k_m])`.
    pub fn group_coefficients(&self) -> Option<(Param, i32, Vec<Param>)> {
        let half = |r: BigRational| Param::new(r / BigRational::from_integer(2.into()));
        let one = || BigRational::one();
        let sigma_of = |q: &Param| Param::new(one() - q.exact().clone());
        match self {
            EntropyKind::GroupEntropy { sigma, l, k } => Some((sigma.clone(), *l, k.clone())),
            // G = (e^{σt} − 2e^{−σt} + e^{−2σt})/σ
            EntropyKind::SIII { q } => Some((
                sigma_of(q),
                -2,
                vec![Param::int(1), Param::int(-2), Param::int(0), Param::int(1)],
            )),
            // G = (e^{2σt} − (3/2)e^{σt} + (3/2)e^{−σt} − e^{−2σt})/σ
            EntropyKind::SIV { q } => Some((
                sigma_of(q),
                -2,
                vec![
                    Param::int(-1),
                    Param::ratio(3, 2),
                    Param::int(0),
                    Param::ratio(-3, 2),
                    Param::int(1),
                ],
            )),
            EntropyKind::SAlphaBetaQ { alpha, beta, q } => {
                let (a, b) = (alpha.exact().clone(), beta.exact().clone());
                let three = BigRational::from_integer(3.into());
                let k1 = half(one() - three.clone() * a.clone() + b.clone());
                let km1 = half(a.clone() - one() - three * b.clone());
                Some((
                    sigma_of(q),
                    -2,
                    vec![beta.clone(), km1, Param::int(0), k1, alpha.clone()],
                ))
            }
            _ => None,
        }
    }
}

/// One entropy: kind, Boltzmann constant, and the scale constant `c` of
/// `Σ p G(c ln 1/p)`.
///
/// The scale is applied by rescaling the exponential's coefficients,
/// `α_k = a_k c^k`, i.e. `G̃(t) = G(ct)/c`; this keeps `G̃` normalized and
/// equals the literal `Σ p G(c ln 1/p)` divided by `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySpec {
    kind: EntropyKind,
    kb: f64,
    scale: Param,
}

fn invalid(kind: &str, reason: impl Into<String>) -> EntropyError {
    EntropyError::InvalidParameter {
        kind: kind.to_string(),
        reason: reason.into(),
    }
}

impl EntropySpec {
    pub fn new(kind: EntropyKind) -> Result<Self, EntropyError> {
        validate(&kind)?;
        Ok(EntropySpec {
            kind,
            kb: 1.0,
            scale: Param::int(1),
        })
    }

    pub fn with_kb(mut self, kb: f64) -> Result<Self, EntropyError> {
        if !(kb.is_finite() && kb > 0.0) {
            return Err(invalid(self.kind.name(), "k_B must be positive"));
        }
        self.kb = kb;
        Ok(self)
    }

    pub fn with_scale(mut self, scale: impl Into<Param>) -> Result<Self, EntropyError> {
        let scale = scale.into();
        if !scale.exact().is_positive() {
            return Err(invalid(self.kind.name(), "scale constant must be positive"));
        }
        if !scale.exact().is_one()
            && matches!(
                self.kind,
                EntropyKind::Scd { .. } | EntropyKind::SDelta { .. } | EntropyKind::SQDelta { .. }
            )
        {
            return Err(invalid(
                self.kind.name(),
                "scale constant applies only to kinds defined by a group exponential",
            ));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn kind(&self) -> &EntropyKind {
        &self.kind
    }

    pub fn kb(&self) -> f64 {
        self.kb
    }

    pub fn scale(&self) -> &Param {
        &self.scale
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn bg() -> Self {
        EntropySpec::new(EntropyKind::BoltzmannGibbs).expect("always valid")
    }

    pub fn tsallis(q: impl Into<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::Tsallis { q: q.into() })
    }

    pub fn kaniadakis(kappa: impl Into<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::Kaniadakis { kappa: kappa.into() })
    }

    pub fn borges_roditi(a: impl Into<Param>, b: impl Into<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::BorgesRoditi {
            a: a.into(),
            b: b.into(),
        })
    }

    pub fn scd(c: impl Into<Param>, d: u32) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::Scd { c: c.into(), d })
    }

    pub fn group(sigma: impl Into<Param>, l: i32, k: Vec<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::GroupEntropy {
            sigma: sigma.into(),
            l,
            k,
        })
    }

    pub fn s_iii(q: impl Into<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::SIII { q: q.into() })
    }

    pub fn s_iv(q: impl Into<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::SIV { q: q.into() })
    }

    pub fn s_alpha_beta_q(
        alpha: impl Into<Param>,
        beta: impl Into<Param>,
        q: impl Into<Param>,
    ) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::SAlphaBetaQ {
            alpha: alpha.into(),
            beta: beta.into(),
            q: q.into(),
        })
    }

    pub fn s_delta(delta: impl Into<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::SDelta { delta: delta.into() })
    }

    pub fn s_q_delta(q: impl Into<Param>, delta: impl Into<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::SQDelta {
            q: q.into(),
            delta: delta.into(),
        })
    }

    pub fn generic(a: Vec<Param>) -> Result<Self, EntropyError> {
        EntropySpec::new(EntropyKind::Generic { a })
    }

    /// Build from a kind name and `name → value` parameters, as used by the
    /// command line and by the `kind:key=value,...` string form.
    pub fn from_parts(name: &str, params: &BTreeMap<String, String>) -> Result<Self, EntropyError> {
        let canon = name.trim().to_ascii_lowercase().replace('-', "_");
        let mut used: Vec<&str> = vec!["kb", "scale"];
        let mut get = |key: &'static str| -> Result<Param, EntropyError> {
            used.push(key);
            let raw = params
                .get(key)
                .ok_or_else(|| invalid(&canon, format!("missing parameter '{key}'")))?;
            raw.parse::<Param>()
                .map_err(|e| invalid(&canon, format!("parameter '{key}': {e}")))
        };
        let kind = match canon.as_str() {
            "bg" | "boltzmann_gibbs" | "shannon" => EntropyKind::BoltzmannGibbs,
            "tsallis" => EntropyKind::Tsallis { q: get("q")? },
            "kaniadakis" => EntropyKind::Kaniadakis { kappa: get("kappa")? },
            "borges_roditi" | "br" => EntropyKind::BorgesRoditi {
                a: get("a")?,
                b: get("b")?,
            },
            "s_cd" | "scd" => {
                let c = get("c")?;
                let d = get("d")?;
                if !d.is_integer() || d.is_negative() {
                    return Err(invalid("s_cd", "d must be a nonnegative integer"));
                }
                let d = u32::try_from(d.exact().to_integer())
                    .map_err(|_| invalid("s_cd", "d is too large"))?;
                EntropyKind::Scd { c, d }
            }
            "group" | "group_entropy" => {
                let sigma = get("sigma")?;
                let l = get("l")?;
                if !l.is_integer() {
                    return Err(invalid("group", "l must be an integer"));
                }
                let l = i32::try_from(l.exact().to_integer()).map_err(|_| invalid("group", "l is too large"))?;
                used.push("k");
                let k = parse_list(&canon, params.get("k"), "k")?;
                EntropyKind::GroupEntropy { sigma, l, k }
            }
            "s_iii" | "siii" => EntropyKind::SIII { q: get("q")? },
            "s_iv" | "siv" => EntropyKind::SIV { q: get("q")? },
            "s_alpha_beta_q" | "sabq" => EntropyKind::SAlphaBetaQ {
                alpha: get("alpha")?,
                beta: get("beta")?,
                q: get("q")?,
            },
            "s_delta" | "sdelta" => EntropyKind::SDelta { delta: get("delta")? },
            "s_q_delta" | "sqdelta" => EntropyKind::SQDelta {
                q: get("q")?,
                delta: get("delta")?,
            },
            "generic" => {
                used.push("a");
                EntropyKind::Generic {
                    a: parse_list(&canon, params.get("a"), "a")?,
                }
            }
            other => return Err(EntropyError::UnknownKind(other.to_string())),
        };
        if let Some(extra) = params.keys().find(|k| !used.contains(&k.as_str())) {
            return Err(invalid(&canon, format!("unexpected parameter '{extra}'")));
        }
        let mut spec = EntropySpec::new(kind)?;
        if let Some(kb) = params.get("kb") {
            let kb = kb
                .parse::<f64>()
                .map_err(|_| invalid(&canon, "k_B must be a number"))?;
            spec = spec.with_kb(kb)?;
        }
        if let Some(scale) = params.get("scale") {
            let scale = scale
                .parse::<Param>()
                .map_err(|e| invalid(&canon, format!("scale: {e}")))?;
            spec = spec.with_scale(scale)?;
        }
        Ok(spec)
    }
}

fn parse_list(kind: &str, raw: Option<&String>, key: &str) -> Result<Vec<Param>, EntropyError> {
    let raw = raw.ok_or_else(|| invalid(kind, format!("missing parameter '{key}'")))?;
    raw.split([';', ','])
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.parse::<Param>()
                .map_err(|e| invalid(kind, format!("parameter '{key}': {e}")))
        })
        .collect()
}

fn check_q(kind: &str, q: &Param) -> Result<(), EntropyError> {
    if q.exact().is_one() {
        return Err(invalid(kind, "q = 1 is the Boltzmann-Gibbs limit; use 'bg'"));
    }
    Ok(())
}

fn validate(kind: &EntropyKind) -> Result<(), EntropyError> {
    let name = kind.name();
    let one = BigRational::one();
    match kind {
        EntropyKind::BoltzmannGibbs => {}
        EntropyKind::Tsallis { q } | EntropyKind::SIII { q } | EntropyKind::SIV { q } => check_q(name, q)?,
        EntropyKind::SAlphaBetaQ { q, .. } => check_q(name, q)?,
        EntropyKind::Kaniadakis { kappa } => {
            let k = kappa.exact();
            if !(k > &-one.clone() && k <= &one) {
                return Err(invalid(name, "kappa must satisfy -1 < kappa <= 1"));
            }
            if k.is_zero() {
                return Err(invalid(name, "kappa = 0 is the Boltzmann-Gibbs limit; use 'bg'"));
            }
        }
        EntropyKind::BorgesRoditi { a, b } => {
            if a == b {
                return Err(invalid(name, "a and b must differ"));
            }
        }
        EntropyKind::Scd { c, .. } => {
            let c = c.exact();
            if !(c.is_positive() && c <= &one) {
                return Err(invalid(name, "c must lie in (0, 1]"));
            }
        }
        EntropyKind::GroupEntropy { sigma, l, k } => {
            if sigma.is_zero() {
                return Err(invalid(name, "sigma must be nonzero"));
            }
            if k.len() < 2 {
                return Err(invalid(name, "need k_l ..= k_m with m > l"));
            }
            if k.first().is_some_and(Param::is_zero) || k.last().is_some_and(Param::is_zero) {
                return Err(invalid(name, "k_l and k_m must be nonzero"));
            }
            let sum: BigRational = k.iter().map(|p| p.exact().clone()).sum();
            let moment: BigRational = k
                .iter()
                .enumerate()
                .map(|(i, p)| p.exact().clone() * BigRational::from_integer((*l as i64 + i as i64).into()))
                .sum();
            if !sum.is_zero() {
                return Err(invalid(name, "coefficients must satisfy Σ k_n = 0"));
            }
            if !moment.is_one() {
                return Err(invalid(name, "coefficients must satisfy Σ n k_n = 1"));
            }
        }
        EntropyKind::SDelta { delta } => {
            if !delta.exact().is_positive() {
                return Err(invalid(name, "delta must be positive"));
            }
        }
        EntropyKind::SQDelta { q, delta } => {
            check_q(name, q)?;
            if !delta.exact().is_positive() {
                return Err(invalid(name, "delta must be positive"));
            }
        }
        EntropyKind::Generic { a } => {
            if a.first().is_none_or(Param::is_zero) {
                return Err(invalid(name, "a_0 must be nonzero"));
            }
        }
    }
    Ok(())
}

/// `kind` or `kind:key=value,key=value`; list values use `;`, e.g.
/// `group:sigma=1/2,l=-1,k=-1;0;1`... with `k` listing `k_l ..= k_m`.
impl FromStr for EntropySpec {
    type Err = EntropyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| invalid(name, format!("expected key=value, got '{pair}'")))?;
            params.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        EntropySpec::from_parts(name, &params)
    }
}

impl EntropySpec {
    /// Named parameters in the `key → value` form accepted by
    /// [`EntropySpec::from_parts`], including non-default `kb` and `scale`.
    pub fn parameters(&self) -> Vec<(String, String)> {
        let list = |v: &[Param]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
        let kv = |k: &str, v: String| (k.to_string(), v);
        let mut out = match &self.kind {
            EntropyKind::BoltzmannGibbs => vec![],
            EntropyKind::Tsallis { q } | EntropyKind::SIII { q } | EntropyKind::SIV { q } => vec![kv("q", q.to_string())],
            EntropyKind::Kaniadakis { kappa } => vec![kv("kappa", kappa.to_string())],
            EntropyKind::BorgesRoditi { a, b } => vec![kv("a", a.to_string()), kv("b", b.to_string())],
            EntropyKind::Scd { c, d } => vec![kv("c", c.to_string()), kv("d", d.to_string())],
            EntropyKind::GroupEntropy { sigma, l, k } => {
                vec![kv("sigma", sigma.to_string()), kv("l", l.to_string()), kv("k", list(k))]
            }
            EntropyKind::SAlphaBetaQ { alpha, beta, q } => vec![
                kv("alpha", alpha.to_string()),
                kv("beta", beta.to_string()),
                kv("q", q.to_string()),
            ],
            EntropyKind::SDelta { delta } => vec![kv("delta", delta.to_string())],
            EntropyKind::SQDelta { q, delta } => vec![kv("q", q.to_string()), kv("delta", delta.to_string())],
            EntropyKind::Generic { a } => vec![kv("a", list(a))],
        };
        if self.kb != 1.0 {
            out.push(kv("kb", self.kb.to_string()));
        }
        if !self.scale.exact().is_one() {
            out.push(kv("scale", self.scale.to_string()));
        }
        out
    }

    /// The same kind with one named parameter replaced.
    pub fn with_parameter(&self, key: &str, value: &str) -> Result<Self, EntropyError> {
        let mut params: BTreeMap<String, String> = self.parameters().into_iter().collect();
        params.insert(key.to_string(), value.to_string());
        EntropySpec::from_parts(self.name(), &params)
    }
}

impl fmt::Display for EntropySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.parameters();
        if params.is_empty() {
            return f.write_str(self.name());
        }
        let joined: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}:{}", self.name(), joined.join(","))
    }
}

/// One row of the entropy catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: &'static str,
    pub domain: &'static str,
    pub form: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let e = |name, parameters, domain, form| CatalogEntry {
        name,
        parameters,
        domain,
        form,
    };
    vec![
        e("bg", "-", "-", "Σ p ln(1/p); G(t)=t"),
        e("tsallis", "q", "q≠1", "(Σ p^q − 1)/(1−q); G(t)=(e^{(1−q)t}−1)/(1−q)"),
        e("kaniadakis", "kappa", "−1<κ≤1, κ≠0", "Σ p (p^{−κ}−p^{κ})/(2κ); G(t)=sinh(κt)/κ"),
        e("borges_roditi", "a,b", "a≠b", "Σ p (p^{−a}−p^{−b})/(a−b); G(t)=(e^{at}−e^{bt})/(a−b)"),
        e("s_cd", "c,d", "c∈(0,1], d∈ℕ", "e/(1−c+cd) Σ Γ(1+d, 1−c ln p) − c/(1−c+cd)"),
        e("group", "sigma,l,k", "σ≠0, Σk_n=0, Σn k_n=1, k_l≠0, k_m≠0", "Σ p (1/σ)Σ k_n p^{−σn}; G(t)=(1/σ)Σ k_n e^{nσt}"),
        e("s_iii", "q", "q≠1", "(1/(1−q)) Σ p (p^{2(1−q)} − 2p^{1−q} + p^{−(1−q)})"),
        e("s_iv", "q", "q≠1", "(1/(1−q)) Σ p (p^{−2(1−q)} − (3/2)p^{−(1−q)} + (3/2)p^{1−q} − p^{2(1−q)})"),
        e(
            "s_alpha_beta_q",
            "alpha,beta,q",
            "q≠1",
            "(1/(1−q)) Σ p (α p^{−2(1−q)} + ½(1−3α+β) p^{−(1−q)} + ½(α−1−3β) p^{1−q} + β p^{2(1−q)})",
        ),
        e("s_delta", "delta", "0<δ≤1+ln W", "Σ p (ln 1/p)^δ"),
        e("s_q_delta", "q,delta", "q≠1, 0<δ≤1+ln W", "Σ p (ln_q 1/p)^δ"),
        e("generic", "a", "a_0≠0", "Σ p G(ln 1/p); G(t)=Σ a_k t^{k+1}/(k+1) truncated"),
    ]
}
