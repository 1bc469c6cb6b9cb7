//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `w^e1*c1 + ... + w^ek*ck` with strictly
//! decreasing exponents (themselves ordinals) and positive coefficients.
//! Besides comparison, addition and successor, the module offers the
//! fundamental sequences used by the tree builders and an [`AffineOrdinal`]
//! type: ordinal-valued expressions that are affine in a single natural
//! parameter `k`, which is all the symbolic stage machinery needs in order to
//! take suprema over infinite families.

mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use parse::{parse_ordinal, ParsedOrdinal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("{0} is not a successor ordinal")]
    NotSuccessor(Ordinal),
    #[error("expression outside the affine fragment: {0}")]
    NonAffine(String),
    #[error("terms are not in Cantor normal form: {0}")]
    NotCanonical(String),
}

/// One `w^exponent * coefficient` summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: Self::zero(),
                coefficient: n,
            }],
        }
    }

    pub fn one() -> Self {
        Self::from_nat(1)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    /// `w^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient: 1,
            }],
        }
    }

    /// `w^exponent * coefficient`.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds an ordinal from terms that must already be in Cantor normal form.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, OrdinalError> {
        for t in &terms {
            if t.coefficient == 0 {
                return Err(OrdinalError::NotCanonical("zero coefficient".into()));
            }
        }
        for w in terms.windows(2) {
            if w[0].exponent <= w[1].exponent {
                return Err(OrdinalError::NotCanonical(format!(
                    "exponent {} does not exceed {}",
                    w[0].exponent, w[1].exponent
                )));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exponent.is_zero())
    }

    pub fn successor(&self) -> Ordinal {
        self + &Ordinal::one()
    }

    pub fn predecessor(&self) -> Result<Ordinal, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NotSuccessor(self.clone()));
        }
        let mut out = self.clone();
        let last = out.terms.last_mut().expect("successor has a term");
        last.coefficient -= 1;
        if last.coefficient == 0 {
            out.terms.pop();
        }
        Ok(out)
    }

    /// Ordinal addition (not commutative: `1 + w = w`).
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent > lead.exponent)
            .cloned()
            .collect();
        let mut rest = rhs.terms.iter();
        if let Some(same) = self.terms.get(terms.len()) {
            if same.exponent == lead.exponent {
                terms.push(Term {
                    exponent: lead.exponent.clone(),
                    coefficient: same
                        .coefficient
                        .checked_add(lead.coefficient)
                        .expect("ordinal coefficient overflow"),
                });
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// The `i`-th element of the standard fundamental sequence of a limit.
    ///
    /// Writing the ordinal as `g + w^e`, the sequence is `g + w^b * i` when
    /// `e = b + 1` and `g + w^(e[i])` when `e` is itself a limit.
    pub fn fundamental_sequence(&self, i: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        let (base, exponent) = self.split_last_unit();
        if exponent.is_successor() {
            let below = exponent.predecessor()?;
            Ok(base.add(&Ordinal::monomial(below, i)))
        } else {
            let inner = exponent.fundamental_sequence(i)?;
            Ok(base.add(&Ordinal::omega_pow(inner)))
        }
    }

    /// The fundamental sequence `i -> self[i]` as an affine family, when it is
    /// one (the last exponent is a successor). Limits whose last exponent is
    /// itself a limit (`w^w`, ...) yield `None`.
    pub fn fundamental_family(&self) -> Result<Option<AffineOrdinal>, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        let (base, exponent) = self.split_last_unit();
        if !exponent.is_successor() {
            return Ok(None);
        }
        let mut terms: Vec<AffineTerm> = base
            .terms
            .iter()
            .map(|t| AffineTerm {
                exponent: t.exponent.clone(),
                slope: 0,
                intercept: t.coefficient,
            })
            .collect();
        terms.push(AffineTerm {
            exponent: exponent.predecessor()?,
            slope: 1,
            intercept: 0,
        });
        AffineOrdinal::new(terms).map(Some)
    }

    /// Splits `g + w^e` into `(g, e)`, peeling a single unit off the last term.
    fn split_last_unit(&self) -> (Ordinal, Ordinal) {
        let mut base = self.clone();
        let last = base.terms.last_mut().expect("nonzero ordinal");
        let exponent = last.exponent.clone();
        last.coefficient -= 1;
        if last.coefficient == 0 {
            base.terms.pop();
        }
        (base, exponent)
    }
}

/// Supremum of a finite collection: its maximum, or zero when empty.
pub fn sup<'a>(xs: impl IntoIterator<Item = &'a Ordinal>) -> Ordinal {
    xs.into_iter().max().cloned().unwrap_or_default()
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient))
            {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::add(self, rhs)
    }
}

impl std::ops::Add for Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: Ordinal) -> Ordinal {
        Ordinal::add(&self, &rhs)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::from_nat(n)
    }
}

fn fmt_exponent(e: &Ordinal) -> String {
    if let Some(n) = e.as_nat() {
        return n.to_string();
    }
    match e.terms.as_slice() {
        [t] if t.coefficient == 1 => e.to_string(),
        _ => format!("({e})"),
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            f.write_str("w")?;
            if t.exponent != Ordinal::one() {
                write!(f, "^{}", fmt_exponent(&t.exponent))?;
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parsed = parse_ordinal(s)?;
        for w in &parsed.warnings {
            log::warn!("{w}");
        }
        Ok(parsed.value)
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The least stage at which an argument enters the grounded extension, or
/// `Never`. `Never` compares above every ordinal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StageValue {
    Stage(Ordinal),
    Never,
}

impl StageValue {
    pub fn nat(n: u64) -> Self {
        StageValue::Stage(Ordinal::from_nat(n))
    }

    pub fn ordinal(&self) -> Option<&Ordinal> {
        match self {
            StageValue::Stage(o) => Some(o),
            StageValue::Never => None,
        }
    }

    pub fn is_never(&self) -> bool {
        matches!(self, StageValue::Never)
    }

    /// Successor, with `Never` absorbing.
    pub fn successor(&self) -> StageValue {
        match self {
            StageValue::Stage(o) => StageValue::Stage(o.successor()),
            StageValue::Never => StageValue::Never,
        }
    }
}

impl fmt::Display for StageValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageValue::Stage(o) => fmt::Display::fmt(o, f),
            StageValue::Never => f.write_str("NEVER"),
        }
    }
}

impl FromStr for StageValue {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "NEVER" {
            Ok(StageValue::Never)
        } else {
            s.parse().map(StageValue::Stage)
        }
    }
}

impl From<Ordinal> for StageValue {
    fn from(o: Ordinal) -> Self {
        StageValue::Stage(o)
    }
}

/// A summand `w^exponent * (slope*k + intercept)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineTerm {
    pub exponent: Ordinal,
    pub slope: u64,
    pub intercept: u64,
}

/// An ordinal expression affine in one natural parameter `k`:
/// `sum_t w^(e_t) * (slope_t*k + intercept_t)` with constant, strictly
/// decreasing exponents. Such an expression is nondecreasing in `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineOrdinal {
    terms: Vec<AffineTerm>,
}

impl AffineOrdinal {
    pub fn new(terms: Vec<AffineTerm>) -> Result<Self, OrdinalError> {
        let terms: Vec<AffineTerm> = terms
            .into_iter()
            .filter(|t| t.slope != 0 || t.intercept != 0)
            .collect();
        for w in terms.windows(2) {
            if w[0].exponent <= w[1].exponent {
                return Err(OrdinalError::NonAffine(format!(
                    "exponents must strictly decrease, found {} before {}",
                    w[0].exponent, w[1].exponent
                )));
            }
        }
        Ok(AffineOrdinal { terms })
    }

    pub fn constant(o: &Ordinal) -> Self {
        AffineOrdinal {
            terms: o
                .terms
                .iter()
                .map(|t| AffineTerm {
                    exponent: t.exponent.clone(),
                    slope: 0,
                    intercept: t.coefficient,
                })
                .collect(),
        }
    }

    /// `w^exponent * (slope*k + intercept)`.
    pub fn linear(exponent: Ordinal, slope: u64, intercept: u64) -> Self {
        AffineOrdinal::new(vec![AffineTerm {
            exponent,
            slope,
            intercept,
        }])
        .expect("single term is affine")
    }

    pub fn terms(&self) -> &[AffineTerm] {
        &self.terms
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.slope == 0)
    }

    pub fn eval(&self, k: u64) -> Ordinal {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let c = t
                    .slope
                    .checked_mul(k)
                    .and_then(|x| x.checked_add(t.intercept))
                    .expect("affine coefficient overflow");
                (c > 0).then(|| Term {
                    exponent: t.exponent.clone(),
                    coefficient: c,
                })
            })
            .collect();
        Ordinal { terms }
    }

    /// Least value over `k in N`; the expression is nondecreasing so this is
    /// the value at zero.
    pub fn min(&self) -> Ordinal {
        self.eval(0)
    }

    /// Least upper bound of `{ self.eval(k) : k in N }`.
    ///
    /// Constant expressions attain their value. Otherwise the first term with
    /// a positive slope grows without bound, so the supremum is the constant
    /// part above it followed by `w^(e+1)`.
    pub fn sup(&self) -> Ordinal {
        let Some(pos) = self.terms.iter().position(|t| t.slope > 0) else {
            return self.eval(0);
        };
        let head = Ordinal {
            terms: self.terms[..pos]
                .iter()
                .map(|t| Term {
                    exponent: t.exponent.clone(),
                    coefficient: t.intercept,
                })
                .collect(),
        };
        head.add(&Ordinal::omega_pow(self.terms[pos].exponent.successor()))
    }

    /// The expression `k -> self(k) + c`.
    pub fn add_constant(&self, c: &Ordinal) -> AffineOrdinal {
        let Some(lead) = c.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<AffineTerm> = self
            .terms
            .iter()
            .take_while(|t| t.exponent > lead.exponent)
            .cloned()
            .collect();
        let mut rest = c.terms.iter();
        if let Some(same) = self.terms.get(terms.len()) {
            if same.exponent == lead.exponent {
                terms.push(AffineTerm {
                    exponent: same.exponent.clone(),
                    slope: same.slope,
                    intercept: same.intercept + lead.coefficient,
                });
                rest.next();
            }
        }
        terms.extend(rest.map(|t| AffineTerm {
            exponent: t.exponent.clone(),
            slope: 0,
            intercept: t.coefficient,
        }));
        AffineOrdinal { terms }
    }

    pub fn successor(&self) -> AffineOrdinal {
        self.add_constant(&Ordinal::one())
    }

    /// Reparametrises by `k -> scale*k + shift`.
    pub fn substitute(&self, scale: u64, shift: u64) -> AffineOrdinal {
        AffineOrdinal {
            terms: self
                .terms
                .iter()
                .map(|t| AffineTerm {
                    exponent: t.exponent.clone(),
                    slope: t.slope * scale,
                    intercept: t.slope * shift + t.intercept,
                })
                .filter(|t| t.slope != 0 || t.intercept != 0)
                .collect(),
        }
    }
}

impl fmt::Display for AffineOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str("+")?;
            }
            let coeff = match (t.slope, t.intercept) {
                (0, d) => d.to_string(),
                (1, 0) => "k".to_string(),
                (s, 0) => format!("{s}k"),
                (1, d) => format!("k+{d}"),
                (s, d) => format!("{s}k+{d}"),
            };
            if t.exponent.is_zero() {
                f.write_str(&coeff)?;
                continue;
            }
            f.write_str("w")?;
            if t.exponent != Ordinal::one() {
                write!(f, "^{}", fmt_exponent(&t.exponent))?;
            }
            if coeff.contains('+') || t.slope > 0 {
                write!(f, "*({coeff})")?;
            } else if coeff != "1" {
                write!(f, "*{coeff}")?;
            }
        }
        Ok(())
    }
}

/// A stage expression over a family parameter: `Never` for the whole family,
/// or an affine ordinal in `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StageExpr {
    Stage(AffineOrdinal),
    Never,
}

impl StageExpr {
    pub fn constant(v: &StageValue) -> Self {
        match v {
            StageValue::Stage(o) => StageExpr::Stage(AffineOrdinal::constant(o)),
            StageValue::Never => StageExpr::Never,
        }
    }

    pub fn eval(&self, k: u64) -> StageValue {
        match self {
            StageExpr::Stage(a) => StageValue::Stage(a.eval(k)),
            StageExpr::Never => StageValue::Never,
        }
    }

    pub fn min(&self) -> StageValue {
        self.eval(0)
    }

    pub fn sup(&self) -> StageValue {
        match self {
            StageExpr::Stage(a) => StageValue::Stage(a.sup()),
            StageExpr::Never => StageValue::Never,
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            StageExpr::Stage(a) => a.is_constant(),
            StageExpr::Never => true,
        }
    }

    pub fn substitute(&self, scale: u64, shift: u64) -> StageExpr {
        match self {
            StageExpr::Stage(a) => StageExpr::Stage(a.substitute(scale, shift)),
            StageExpr::Never => StageExpr::Never,
        }
    }
}

impl fmt::Display for StageExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageExpr::Stage(a) => fmt::Display::fmt(a, f),
            StageExpr::Never => f.write_str("NEVER"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(Ordinal::omega().cmp(&Ordinal::omega()), Ordering::Equal);
        assert_eq!(o("w*2").cmp(&o("w+5")), Ordering::Greater);
        assert_eq!(o("3").cmp(&o("w")), Ordering::Less);
        assert!(o("w^w") > o("w^5*100+w"));
        assert!(o("w^(w+1)") > o("w^w*7"));
    }

    #[test]
    fn successor_examples() {
        assert_eq!(Ordinal::zero().successor(), Ordinal::one());
        assert_eq!(Ordinal::omega().successor(), o("w+1"));
        assert_eq!(o("w^2+w*3").successor(), o("w^2+w*3+1"));
    }

    #[test]
    fn addition_absorbs_smaller_left_terms() {
        assert_eq!(o("1") + o("w"), o("w"));
        assert_eq!(o("w+3") + o("w"), o("w*2"));
        assert_eq!(o("w^2+w") + o("w^2*2+1"), o("w^2*3+1"));
        assert_eq!(o("w") + o("3"), o("w+3"));
    }

    #[test]
    fn limits_and_successors() {
        assert!(!Ordinal::zero().is_limit());
        assert!(!Ordinal::zero().is_successor());
        assert!(o("w").is_limit());
        assert!(o("w*2+1").is_successor());
        assert_eq!(o("w*2+1").predecessor().unwrap(), o("w*2"));
        assert!(o("w").predecessor().is_err());
    }

    #[test]
    fn fundamental_sequence_examples() {
        let w = Ordinal::omega();
        assert_eq!(w.fundamental_sequence(7).unwrap(), o("7"));
        assert_eq!(o("w*2").fundamental_sequence(3).unwrap(), o("w+3"));
        assert_eq!(o("w^2").fundamental_sequence(4).unwrap(), o("w*4"));
        assert_eq!(o("w^w").fundamental_sequence(3).unwrap(), o("w^3"));
        assert_eq!(o("w^2+w").fundamental_sequence(0).unwrap(), o("w^2"));
        assert_eq!(
            o("w^w").fundamental_sequence(0).unwrap(),
            Ordinal::one(),
            "w^(w[0]) = w^0"
        );
        assert!(matches!(
            o("w+1").fundamental_sequence(1),
            Err(OrdinalError::NotLimit(_))
        ));
        assert!(Ordinal::zero().fundamental_sequence(1).is_err());
    }

    #[test]
    fn fundamental_family_matches_sequence() {
        for s in ["w", "w*2", "w^2", "w^2*2", "w^3+w^2+w*4", "w^(w+1)"] {
            let x = o(s);
            let fam = x.fundamental_family().unwrap().unwrap();
            for i in 0..20 {
                assert_eq!(fam.eval(i), x.fundamental_sequence(i).unwrap(), "{s}[{i}]");
            }
            assert_eq!(fam.sup(), x, "sup of {s}[i]");
        }
        assert_eq!(o("w^w").fundamental_family().unwrap(), None);
    }

    #[test]
    fn affine_sup_examples() {
        // sup_k (k+1) = w
        assert_eq!(AffineOrdinal::linear(Ordinal::zero(), 1, 1).sup(), o("w"));
        // sup_k (w*k + 5) = w^2
        let e = AffineOrdinal::linear(Ordinal::one(), 1, 0).add_constant(&o("5"));
        assert_eq!(e.eval(3), o("w*3+5"));
        assert_eq!(e.sup(), o("w^2"));
        // sup_k (w + k + 2) = w*2
        let e = AffineOrdinal::constant(&o("w")).add_constant(&Ordinal::zero());
        let e = AffineOrdinal::new(
            e.terms()
                .iter()
                .cloned()
                .chain([AffineTerm {
                    exponent: Ordinal::zero(),
                    slope: 1,
                    intercept: 2,
                }])
                .collect(),
        )
        .unwrap();
        assert_eq!(e.sup(), o("w*2"));
        assert_eq!(e.min(), o("w+2"));
        assert_eq!(AffineOrdinal::constant(&o("w+4")).sup(), o("w+4"));
    }

    #[test]
    fn non_affine_rejected() {
        let bad = AffineOrdinal::new(vec![
            AffineTerm {
                exponent: Ordinal::zero(),
                slope: 1,
                intercept: 0,
            },
            AffineTerm {
                exponent: Ordinal::one(),
                slope: 1,
                intercept: 0,
            },
        ]);
        assert!(matches!(bad, Err(OrdinalError::NonAffine(_))));
    }

    #[test]
    fn affine_successor_and_substitution() {
        let e = AffineOrdinal::linear(Ordinal::one(), 1, 0).successor();
        assert_eq!(e.eval(0), o("1"));
        assert_eq!(e.eval(2), o("w*2+1"));
        let s = e.substitute(2, 1);
        assert_eq!(s.eval(1), o("w*3+1"));
    }

    #[test]
    fn stage_value_order_puts_never_on_top() {
        assert!(StageValue::Never > StageValue::Stage(o("w^w^w")));
        assert!(StageValue::nat(3) < StageValue::nat(4));
        assert_eq!("NEVER".parse::<StageValue>().unwrap(), StageValue::Never);
        assert_eq!(StageValue::Never.successor(), StageValue::Never);
    }

    #[test]
    fn sup_of_finite_set_is_max() {
        let xs = [o("3"), o("w"), o("w+1")];
        assert_eq!(sup(&xs), o("w+1"));
        assert_eq!(sup(&[]), Ordinal::zero());
    }
}
