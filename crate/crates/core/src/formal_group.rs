//! One-dimensional formal group laws `Φ(x,y) = G(F(x) + F(y))`.
//!
//! Laws are built from a normalized group exponential `G` and checked
//! coefficientwise for symmetry, null-composability and associativity. Over
//! [`BigRational`] the checks are exact identities to the truncation degree.

use std::collections::BTreeMap;

use num_rational::BigRational;
use thiserror::Error;

use crate::coeff::{format_rational, Coefficient};
use crate::series::{SeriesError, TruncatedSeries};

/// Default truncation degree for trivariate associativity expansions.
pub const DEFAULT_ASSOCIATIVITY_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormalGroupError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("requested order {requested} exceeds the exponential's order {available}")]
    OrderTooHigh { requested: usize, available: usize },
    #[error("Abel parameters must differ (a = b is degenerate)")]
    DegenerateParameters,
    #[error("table is not of the form x + y + higher terms")]
    NotAGroupLaw,
}

/// Bivariate series truncated at total degree `N`: `Σ c[k][m] x^k y^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateTruncated<C> {
    // rows[k][m] holds c_{km}; row k has N - k + 1 entries
    rows: Vec<Vec<C>>,
}

impl<C: Coefficient> BivariateTruncated<C> {
    pub fn zero(order: usize) -> Self {
        BivariateTruncated {
            rows: (0..=order).map(|k| vec![C::zero(); order - k + 1]).collect(),
        }
    }

    /// Table from explicit `(k, m, c)` terms; terms above `order` are dropped.
    pub fn from_terms(order: usize, terms: &[(usize, usize, C)]) -> Self {
        let mut b = Self::zero(order);
        for (k, m, c) in terms {
            if k + m <= order {
                b.rows[*k][*m] = b.rows[*k][*m].clone() + c.clone();
            }
        }
        b
    }

    /// `x + y` truncated at `order`.
    pub fn additive(order: usize) -> Self {
        Self::from_terms(order, &[(1, 0, C::one()), (0, 1, C::one())])
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    /// `c_{km}`; zero above the truncation degree.
    pub fn get(&self, k: usize, m: usize) -> C {
        self.rows
            .get(k)
            .and_then(|row| row.get(m))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Nonzero entries in order of total degree, then by `k` descending.
    pub fn terms(&self) -> Vec<(usize, usize, C)> {
        let n = self.order();
        let mut out = Vec::new();
        for deg in 0..=n {
            for k in (0..=deg).rev() {
                let c = &self.rows[k][deg - k];
                if !c.is_zero() {
                    out.push((k, deg - k, c.clone()));
                }
            }
        }
        out
    }

    /// Entries with `k, m ≥ 1`: the interaction part `Φ − Φ(x,0) − Φ(0,y)`.
    pub fn mixed_terms(&self) -> Vec<(usize, usize, C)> {
        self.terms().into_iter().filter(|(k, m, _)| *k > 0 && *m > 0).collect()
    }

    pub fn swapped(&self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for k in 0..=n {
            for m in 0..=n - k {
                out.rows[m][k] = self.rows[k][m].clone();
            }
        }
        out
    }

    fn mul_truncated(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for (k1, m1, a) in self.terms() {
            for (k2, m2, b) in other.terms() {
                let (k, m) = (k1 + k2, m1 + m2);
                if k + m <= n {
                    out.rows[k][m] = out.rows[k][m].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    fn powers(&self, max: usize) -> Vec<Self> {
        let mut out = vec![Self::from_terms(self.order(), &[(0, 0, C::one())])];
        for k in 1..=max {
            let next = out[k - 1].mul_truncated(self);
            out.push(next);
        }
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> BivariateTruncated<D> {
        BivariateTruncated {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

impl BivariateTruncated<BigRational> {
    /// Triangular table as TSV lines `k\tm\tp/q`, ordered by total degree.
    pub fn to_tsv(&self) -> String {
        let n = self.order();
        let mut s = String::from("# k\tm\tc_km\n");
        for deg in 0..=n {
            for k in (0..=deg).rev() {
                let m = deg - k;
                s.push_str(&format!("{k}\t{m}\t{}\n", format_rational(&self.rows[k][m])));
            }
        }
        s
    }
}

/// A formal group law together with the exponential and logarithm it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupLaw<C> {
    phi: BivariateTruncated<C>,
    exp: TruncatedSeries<C>,
    log: TruncatedSeries<C>,
}

impl<C: Coefficient> GroupLaw<C> {
    /// `Φ(x,y) = G(F(x) + F(y))` with `F = revert(G)`, at the order of `G`.
    pub fn from_exponential(exp: &TruncatedSeries<C>) -> Result<Self, FormalGroupError> {
        let log = exp.revert()?;
        let n = exp.order();
        // Σ_k g_k (F(x)+F(y))^k with (F(x)+F(y))^k = Σ_j C(k,j) F(x)^j F(y)^{k-j}
        let fp = log.powers(n);
        let mut phi: BivariateTruncated<C> = BivariateTruncated::zero(n);
        for k in 1..=n {
            let gk = exp.coeff(k);
            if gk.is_zero() {
                continue;
            }
            let mut binom = C::one();
            for j in 0..=k {
                if j > 0 {
                    binom = binom * C::from_int((k - j + 1) as i64) / C::from_int(j as i64);
                }
                let weight = gk.clone() * binom.clone();
                let (left, right) = (&fp[j], &fp[k - j]);
                for a in j..=n {
                    let la = left.coeff(a);
                    if la.is_zero() {
                        continue;
                    }
                    for b in (k - j)..=(n - a) {
                        let rb = right.coeff(b);
                        if !rb.is_zero() {
                            phi.rows[a][b] =
                                phi.rows[a][b].clone() + weight.clone() * la.clone() * rb;
                        }
                    }
                }
            }
        }
        Ok(GroupLaw { phi, exp: exp.clone(), log })
    }

    pub fn phi(&self) -> &BivariateTruncated<C> {
        &self.phi
    }

    pub fn exp(&self) -> &TruncatedSeries<C> {
        &self.exp
    }

    pub fn log(&self) -> &TruncatedSeries<C> {
        &self.log
    }

    pub fn order(&self) -> usize {
        self.phi.order()
    }

    /// The coefficients `c_{km}`, `k, m ≥ 1`, of `Φ − (x + y)`.
    pub fn interaction_terms(&self) -> Vec<(usize, usize, C)> {
        self.phi.mixed_terms()
    }

    pub fn check_axioms(&self) -> GroupAxiomReport<C> {
        check_axioms(&self.phi, self.order().min(DEFAULT_ASSOCIATIVITY_DEGREE))
    }

    pub fn inverse(&self) -> TruncatedSeries<C> {
        formal_inverse(&self.phi).expect("constructed laws are normalized")
    }

    pub fn lie_bracket(&self) -> BivariateTruncated<C> {
        lie_bracket(&self.phi)
    }
}

/// Build the group law of `exp` truncated at `order`.
pub fn group_law_from_exponential<C: Coefficient>(
    exp: &TruncatedSeries<C>,
    order: usize,
) -> Result<GroupLaw<C>, FormalGroupError> {
    if order > exp.order() {
        return Err(FormalGroupError::OrderTooHigh {
            requested: order,
            available: exp.order(),
        });
    }
    GroupLaw::from_exponential(&exp.truncate(order))
}

/// First coefficient at which an identity fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation<C> {
    /// Monomial exponents (`[k, m]` or `[i, j, l]` for associativity).
    pub exponents: Vec<usize>,
    pub lhs: C,
    pub rhs: C,
}

impl<C: Coefficient> Violation<C> {
    pub fn degree(&self) -> usize {
        self.exponents.iter().sum()
    }

    pub fn discrepancy(&self) -> C {
        self.lhs.clone() - self.rhs.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupAxiomReport<C> {
    pub symmetry: Option<Violation<C>>,
    pub null_composability: Option<Violation<C>>,
    pub associativity: Option<Violation<C>>,
    /// Total degree to which associativity was expanded.
    pub associativity_degree: usize,
}

impl<C> GroupAxiomReport<C> {
    pub fn all_pass(&self) -> bool {
        self.symmetry.is_none() && self.null_composability.is_none() && self.associativity.is_none()
    }
}

/// Check symmetry, `Φ(x,0) = x = Φ(0,x)`, and associativity to `assoc_degree`.
///
/// Works on any table, including ones that are not of exponential form.
pub fn check_axioms<C: Coefficient>(
    phi: &BivariateTruncated<C>,
    assoc_degree: usize,
) -> GroupAxiomReport<C> {
    let n = phi.order();
    let mut symmetry = None;
    'sym: for deg in 0..=n {
        for k in (0..=deg).rev() {
            let (a, b) = (phi.get(k, deg - k), phi.get(deg - k, k));
            if a != b {
                symmetry = Some(Violation {
                    exponents: vec![k, deg - k],
                    lhs: a,
                    rhs: b,
                });
                break 'sym;
            }
        }
    }

    let mut null_composability = None;
    for k in 0..=n {
        let expected = if k == 1 { C::one() } else { C::zero() };
        for (exps, c) in [(vec![k, 0], phi.get(k, 0)), (vec![0, k], phi.get(0, k))] {
            if c != expected {
                null_composability = Some(Violation {
                    exponents: exps,
                    lhs: c,
                    rhs: expected.clone(),
                });
                break;
            }
        }
        if null_composability.is_some() {
            break;
        }
    }

    let degree = assoc_degree.min(n);
    let lhs = substitute_right(phi, degree);
    let rhs = substitute_left(phi, degree);
    let mut associativity = None;
    for (exps, l) in monomials3(degree) {
        let l_val = lhs.get(&l).cloned().unwrap_or_else(C::zero);
        let r_val = rhs.get(&l).cloned().unwrap_or_else(C::zero);
        if l_val != r_val {
            associativity = Some(Violation {
                exponents: exps,
                lhs: l_val,
                rhs: r_val,
            });
            break;
        }
    }

    GroupAxiomReport {
        symmetry,
        null_composability,
        associativity,
        associativity_degree: degree,
    }
}

type Trivariate<C> = BTreeMap<(usize, usize, usize), C>;

// exponent triples by total degree, then lexicographically descending
fn monomials3(degree: usize) -> Vec<(Vec<usize>, (usize, usize, usize))> {
    let mut out = Vec::new();
    for d in 0..=degree {
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                let l = d - i - j;
                out.push((vec![i, j, l], (i, j, l)));
            }
        }
    }
    out
}

fn accumulate<C: Coefficient>(map: &mut Trivariate<C>, key: (usize, usize, usize), c: C) {
    let entry = map.entry(key).or_insert_with(C::zero);
    *entry = entry.clone() + c;
}

// Φ(x, Φ(y, z)) truncated at `degree`
fn substitute_right<C: Coefficient>(phi: &BivariateTruncated<C>, degree: usize) -> Trivariate<C> {
    let inner = truncated_to(phi, degree);
    let powers = inner.powers(degree);
    let mut out = Trivariate::new();
    for (k, m, c) in inner.terms() {
        for (i, j, p) in powers[m].terms() {
            if k + i + j <= degree {
                accumulate(&mut out, (k, i, j), c.clone() * p);
            }
        }
    }
    out
}

// Φ(Φ(x, y), z) truncated at `degree`
fn substitute_left<C: Coefficient>(phi: &BivariateTruncated<C>, degree: usize) -> Trivariate<C> {
    let inner = truncated_to(phi, degree);
    let powers = inner.powers(degree);
    let mut out = Trivariate::new();
    for (k, m, c) in inner.terms() {
        for (i, j, p) in powers[k].terms() {
            if i + j + m <= degree {
                accumulate(&mut out, (i, j, m), c.clone() * p);
            }
        }
    }
    out
}

fn truncated_to<C: Coefficient>(phi: &BivariateTruncated<C>, degree: usize) -> BivariateTruncated<C> {
    let terms: Vec<_> = phi.terms();
    BivariateTruncated::from_terms(degree, &terms)
}

/// The formal inverse `φ(x) = -x + …` with `Φ(x, φ(x)) = 0` to the table order.
///
/// Meaningful only as a formal series; no inverse exists on the nonnegative
/// reals where entropies live.
pub fn formal_inverse<C: Coefficient>(
    phi: &BivariateTruncated<C>,
) -> Result<TruncatedSeries<C>, FormalGroupError> {
    if !phi.get(0, 0).is_zero() || !phi.get(1, 0).is_one() || !phi.get(0, 1).is_one() {
        return Err(FormalGroupError::NotAGroupLaw);
    }
    let n = phi.order();
    let mut inv = TruncatedSeries::monomial(1, -C::one(), n);
    for deg in 2..=n {
        let residual = substitute_series(phi, &inv);
        let fix = residual.coeff(deg);
        let mut coeffs = inv.coeffs().to_vec();
        coeffs[deg] = coeffs[deg].clone() - fix;
        inv = TruncatedSeries::new(coeffs);
    }
    Ok(inv)
}

// Φ(x, s(x)) as a univariate series
fn substitute_series<C: Coefficient>(
    phi: &BivariateTruncated<C>,
    s: &TruncatedSeries<C>,
) -> TruncatedSeries<C> {
    let n = phi.order();
    let powers = s.powers(n);
    let mut out = vec![C::zero(); n + 1];
    for (k, m, c) in phi.terms() {
        for (d, p) in powers[m].coeffs().iter().enumerate() {
            if k + d <= n && !p.is_zero() {
                out[k + d] = out[k + d].clone() + c.clone() * p.clone();
            }
        }
    }
    TruncatedSeries::new(out)
}

/// Antisymmetrized quadratic part `Ψ₂(x,y) − Ψ₂(y,x)`, as a degree-2 table.
///
/// Vanishes for every symmetric law.
pub fn lie_bracket<C: Coefficient>(phi: &BivariateTruncated<C>) -> BivariateTruncated<C> {
    let mut terms = Vec::new();
    for k in 0..=2 {
        let m = 2 - k;
        let c = phi.get(k, m) - phi.get(m, k);
        terms.push((k, m, c));
    }
    BivariateTruncated::from_terms(2, &terms)
}

/// Coefficients `β_1 ..= β_n` of the Abel law of `(e^{at} − e^{bt})/(a − b)`.
///
/// `β_1 = a + b` and `β_k = (−1)^{k−1}/(k!(k−1)) Π_{i+j=k−1} (ia + jb)`.
pub fn abel_coefficients<C: Coefficient>(a: &C, b: &C, n: usize) -> Result<Vec<C>, FormalGroupError> {
    if a == b {
        return Err(FormalGroupError::DegenerateParameters);
    }
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        if k == 1 {
            out.push(a.clone() + b.clone());
            continue;
        }
        let mut prod = C::one();
        for i in 0..k {
            let j = k - 1 - i;
            prod = prod * (C::from_int(i as i64) * a.clone() + C::from_int(j as i64) * b.clone());
        }
        let fact: i64 = (1..=k as i64).product();
        let sign = if k % 2 == 0 { -C::one() } else { C::one() };
        out.push(sign * prod / C::from_int(fact * (k as i64 - 1)));
    }
    Ok(out)
}

/// `x + y + β_1 xy + Σ_{k≥2} β_k (x y^k + x^k y)` truncated at `order`.
pub fn abel_law_table<C: Coefficient>(beta: &[C], order: usize) -> BivariateTruncated<C> {
    let mut terms = vec![(1, 0, C::one()), (0, 1, C::one())];
    for (idx, bk) in beta.iter().enumerate() {
        let k = idx + 1;
        if k == 1 {
            terms.push((1, 1, bk.clone()));
        } else {
            terms.push((1, k, bk.clone()));
            terms.push((k, 1, bk.clone()));
        }
    }
    BivariateTruncated::from_terms(order, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::series::ExactSeries;

    type Q = BigRational;

    fn factorial(n: i64) -> i64 {
        (1..=n).product()
    }

    // (e^{σt} - 1)/σ
    fn deformed_exp(sigma: Q, order: usize) -> ExactSeries {
        let mut c = vec![rat(0, 1)];
        for k in 1..=order {
            c.push(num_traits::pow(sigma.clone(), k - 1) / rat(factorial(k as i64), 1));
        }
        TruncatedSeries::new(c)
    }

    #[test]
    fn additive_law_from_identity() {
        let law = GroupLaw::from_exponential(&ExactSeries::identity(8)).unwrap();
        assert_eq!(law.phi(), &BivariateTruncated::additive(8));
        assert!(law.check_axioms().all_pass());
        assert_eq!(law.inverse(), ExactSeries::monomial(1, rat(-1, 1), 8));
        assert_eq!(law.lie_bracket(), BivariateTruncated::zero(2));
    }

    #[test]
    fn multiplicative_law_from_exp_minus_one() {
        let law = GroupLaw::from_exponential(&deformed_exp(rat(1, 1), 8)).unwrap();
        let expected = BivariateTruncated::from_terms(8, &[(1, 0, rat(1, 1)), (0, 1, rat(1, 1)), (1, 1, rat(1, 1))]);
        assert_eq!(law.phi(), &expected);
        // φ = -x/(1+x) = -x + x^2 - x^3 + ...
        let inv = law.inverse();
        for k in 1..=8 {
            let sign = if k % 2 == 1 { -1 } else { 1 };
            assert_eq!(inv.coeff(k), rat(sign, 1));
        }
        assert_eq!(law.lie_bracket(), BivariateTruncated::zero(2));
    }

    #[test]
    fn deformed_law_has_single_interaction_term() {
        let sigma = rat(-3, 7);
        let law = group_law_from_exponential(&deformed_exp(sigma.clone(), 10), 8).unwrap();
        assert_eq!(law.order(), 8);
        assert_eq!(law.interaction_terms(), vec![(1, 1, sigma.clone())]);
        // φ(x) = -x/(1+σx) = Σ_{k≥1} -(-σ)^{k-1} x^k
        let inv = law.inverse();
        for k in 1..=8usize {
            assert_eq!(inv.coeff(k), -num_traits::pow(-sigma.clone(), k - 1));
        }
    }

    #[test]
    fn order_above_exponential_is_rejected() {
        let err = group_law_from_exponential(&ExactSeries::identity(4), 6).unwrap_err();
        assert_eq!(err, FormalGroupError::OrderTooHigh { requested: 6, available: 4 });
    }

    #[test]
    fn non_normalized_exponential_is_rejected() {
        let g = ExactSeries::exp_from_a_sequence(&[rat(2, 1), rat(1, 1)], 4).unwrap();
        assert!(matches!(
            GroupLaw::from_exponential(&g),
            Err(FormalGroupError::Series(SeriesError::NotNormalized))
        ));
    }

    #[test]
    fn hand_built_table_fails_associativity_at_degree_three() {
        // Φ = x + y + x²y: Φ(Φ(x,y),z) has 2xyz, Φ(x,Φ(y,z)) does not
        let phi = BivariateTruncated::from_terms(
            6,
            &[(1, 0, rat(1, 1)), (0, 1, rat(1, 1)), (2, 1, rat(1, 1))],
        );
        let report = check_axioms(&phi, 6);
        let assoc = report.associativity.expect("associativity must fail");
        assert_eq!(assoc.exponents, vec![1, 1, 1]);
        assert_eq!(assoc.degree(), 3);
        assert_eq!(assoc.discrepancy(), rat(-2, 1));
        let sym = report.symmetry.expect("not symmetric");
        assert_eq!(sym.exponents, vec![2, 1]);
        assert!(report.null_composability.is_none());
    }

    #[test]
    fn null_composability_violation_is_reported() {
        let phi = BivariateTruncated::from_terms(4, &[(1, 0, rat(1, 1)), (0, 1, rat(1, 1)), (2, 0, rat(1, 1))]);
        let v = check_axioms(&phi, 4).null_composability.unwrap();
        assert_eq!(v.exponents, vec![2, 0]);
    }

    #[test]
    fn bracket_of_asymmetric_quadratic_part() {
        // Φ = x + y + 2x² − y²: bracket = 3x² − 3y²
        let phi = BivariateTruncated::from_terms(
            4,
            &[(1, 0, rat(1, 1)), (0, 1, rat(1, 1)), (2, 0, rat(2, 1)), (0, 2, rat(-1, 1))],
        );
        let br = lie_bracket(&phi);
        assert_eq!(br.get(2, 0), rat(3, 1));
        assert_eq!(br.get(0, 2), rat(-3, 1));
        assert_eq!(br.get(1, 1), rat(0, 1));
    }

    #[test]
    fn abel_closed_formula() {
        let beta = abel_coefficients(&rat(2, 1), &rat(1, 1), 5).unwrap();
        assert_eq!(beta, vec![rat(3, 1), rat(-1, 1), rat(2, 1), rat(-5, 1), rat(14, 1)]);
        let sym = abel_coefficients(&rat(1, 1), &rat(-1, 1), 2).unwrap();
        assert_eq!(sym[0], rat(0, 1));
        assert_eq!(sym[1], rat(1, 2));
        assert_eq!(
            abel_coefficients(&rat(1, 2), &rat(1, 2), 3),
            Err(FormalGroupError::DegenerateParameters)
        );
    }

    #[test]
    fn formal_inverse_rejects_non_laws() {
        let phi = BivariateTruncated::from_terms(3, &[(1, 0, rat(2, 1)), (0, 1, rat(1, 1))]);
        assert_eq!(formal_inverse(&phi), Err(FormalGroupError::NotAGroupLaw));
    }

    #[test]
    fn tsv_lists_triangle() {
        let tsv = BivariateTruncated::<Q>::additive(2).to_tsv();
        let lines: Vec<_> = tsv.lines().collect();
        assert_eq!(lines[0], "# k\tm\tc_km");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines.contains(&"1\t0\t1"));
        assert!(lines.contains(&"1\t1\t0"));
    }
}
