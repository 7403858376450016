//! Exact arithmetic in `Q_p` and `F_q((t))`: quadratic Hilbert symbols, tame
//! symbols, roots of unity, the Hilbert cover `F× ×{±1}` with its section
//! `τ(a) = (a², {a, a})`, and the genuine-character obstruction.
//!
//! Field elements are global objects (rationals, Laurent polynomials), so
//! valuations and residues are exact. Only `Q_p` itself is supported among
//! p-adic fields; `{−1, −1}` is nontrivial exactly over odd-degree
//! extensions of `Q₂`, of which `Q₂` is the only one available here.

pub mod fq;
pub mod laurent;

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use fq::FiniteField;
pub use laurent::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalFieldError {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("bad field modulus: {0}")]
    BadModulus(String),
    #[error("degree {m} not supported over a field with q = {q} (need p ∤ m and m | q − 1)")]
    DegreeNotSupported { m: u64, q: u64 },
    #[error("wild case not supported: μ_{m} with residue characteristic {p}")]
    UnsupportedWildCase { p: u64, m: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("element does not belong to {0}")]
    WrongField(String),
    #[error("inconsistent character data: {0}")]
    InconsistentCharacter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() != rhs.is_minus())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Padic,
    Laurent,
}

/// `Q_p`, or `F_q((t))` with an explicit model of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalField {
    kind: FieldKind,
    residue: Arc<FiniteField>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Rational(BigRational),
    Laurent(LaurentPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverElement {
    pub a: FieldElement,
    pub s: Sign,
}

impl LocalField {
    pub fn padic(p: u64) -> Result<Self, LocalFieldError> {
        Ok(Self {
            kind: FieldKind::Padic,
            residue: Arc::new(FiniteField::prime(p)?),
        })
    }

    pub fn laurent(q: u64) -> Result<Self, LocalFieldError> {
        Ok(Self {
            kind: FieldKind::Laurent,
            residue: Arc::new(FiniteField::new(q)?),
        })
    }

    pub fn laurent_with_modulus(q: u64, modulus: &str) -> Result<Self, LocalFieldError> {
        Ok(Self {
            kind: FieldKind::Laurent,
            residue: Arc::new(FiniteField::with_modulus(q, modulus)?),
        })
    }

    /// `Qp:7`, `Fq((t)):5`, `Fq((t)):9:x^2+x+2`.
    pub fn parse(desc: &str) -> Result<Self, LocalFieldError> {
        let bad = || LocalFieldError::UnsupportedField(format!("unrecognized field descriptor '{desc}'"));
        if let Some(p) = desc.strip_prefix("Qp:") {
            return Self::padic(p.trim().parse().map_err(|_| bad())?);
        }
        if let Some(rest) = desc.strip_prefix("Fq((t)):") {
            let (q, modulus) = match rest.split_once(':') {
                Some((q, m)) => (q, Some(m)),
                None => (rest, None),
            };
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return match modulus {
                Some(m) => Self::laurent_with_modulus(q, m),
                None => Self::laurent(q),
            };
        }
        Err(bad())
    }

    pub fn descriptor(&self) -> String {
        match self.kind {
            FieldKind::Padic => format!("Qp:{}", self.p()),
            FieldKind::Laurent if self.residue.degree() == 1 => format!("Fq((t)):{}", self.q()),
            FieldKind::Laurent => format!("Fq((t)):{}:{}", self.q(), self.residue.modulus_string()),
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.residue.p()
    }

    pub fn q(&self) -> u64 {
        self.residue.q()
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.residue
    }

    pub fn primitive_root(&self) -> u64 {
        self.residue.primitive_root()
    }

    pub fn supports_quadratic_symbol(&self) -> bool {
        self.q() % 2 == 1 || self.kind == FieldKind::Padic
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        match self.kind {
            FieldKind::Padic => FieldElement::Rational(BigRational::from_integer(n.into())),
            FieldKind::Laurent => FieldElement::Laurent(
                LaurentPoly::constant(self.residue.from_int(n)).expect("integer must be a unit"),
            ),
        }
    }

    pub fn uniformizer(&self) -> FieldElement {
        match self.kind {
            FieldKind::Padic => self.from_int(self.p() as i64),
            FieldKind::Laurent => FieldElement::Laurent(LaurentPoly::monomial(1, 1).expect("t ≠ 0")),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement, LocalFieldError> {
        match self.kind {
            FieldKind::Padic => {
                let bad = || LocalFieldError::Parse(format!("cannot parse rational '{s}'"));
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s.trim(), "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                if n.is_zero() {
                    return Err(LocalFieldError::ZeroElement);
                }
                Ok(FieldElement::Rational(BigRational::new(n, d)))
            }
            FieldKind::Laurent => Ok(FieldElement::Laurent(LaurentPoly::parse(s, &self.residue)?)),
        }
    }

    fn check(&self, a: &FieldElement) -> Result<(), LocalFieldError> {
        match (self.kind, a) {
            (FieldKind::Padic, FieldElement::Rational(r)) if !r.is_zero() => Ok(()),
            (FieldKind::Padic, FieldElement::Rational(_)) => Err(LocalFieldError::ZeroElement),
            (FieldKind::Laurent, FieldElement::Laurent(_)) => Ok(()),
            _ => Err(LocalFieldError::WrongField(self.descriptor())),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Rational(x), FieldElement::Rational(y)) => FieldElement::Rational(x * y),
            (FieldElement::Laurent(x), FieldElement::Laurent(y)) => FieldElement::Laurent(x.mul(y, &self.residue)),
            _ => panic!("mixed field elements"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match a {
            FieldElement::Rational(x) => FieldElement::Rational(-x),
            FieldElement::Laurent(x) => FieldElement::Laurent(x.neg(&self.residue)),
        }
    }

    /// `a + b`, or `None` if it vanishes.
    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        match (a, b) {
            (FieldElement::Rational(x), FieldElement::Rational(y)) => {
                let s = x + y;
                (!s.is_zero()).then_some(FieldElement::Rational(s))
            }
            (FieldElement::Laurent(x), FieldElement::Laurent(y)) => x.add(y, &self.residue).map(FieldElement::Laurent),
            _ => panic!("mixed field elements"),
        }
    }

    pub fn valuation(&self, a: &FieldElement) -> i64 {
        match a {
            FieldElement::Rational(r) => {
                let p = BigInt::from(self.p());
                padic_valuation(r.numer(), &p) - padic_valuation(r.denom(), &p)
            }
            FieldElement::Laurent(x) => x.valuation(),
        }
    }

    /// Residue in `F_q` of the unit part `π^{−v(a)} a`.
    pub fn unit_residue(&self, a: &FieldElement) -> u64 {
        match a {
            FieldElement::Rational(_) => self.unit_mod(a, self.p()),
            FieldElement::Laurent(x) => x.residue(),
        }
    }

    /// Unit part of a rational modulo `m`, a power of `p`.
    fn unit_mod(&self, a: &FieldElement, m: u64) -> u64 {
        let FieldElement::Rational(r) = a else {
            unreachable!("unit_mod on a rational")
        };
        let p = BigInt::from(self.p());
        let m = BigInt::from(m);
        let strip = |x: &BigInt| {
            let mut x = x.clone();
            while x.is_multiple_of(&p) {
                x /= &p;
            }
            x
        };
        let (n, d) = (strip(r.numer()), strip(r.denom()));
        let inv = d.extended_gcd(&m).x;
        (n * inv).mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    pub fn format_element(&self, a: &FieldElement) -> String {
        match a {
            FieldElement::Rational(r) if r.is_integer() => r.numer().to_string(),
            FieldElement::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            FieldElement::Laurent(x) => x.to_string(),
        }
    }

    /// Residue of `(−1)^{v(a)v(b)} a^{v(b)} b^{−v(a)}` in `F_q×`.
    fn tame_residue(&self, a: &FieldElement, b: &FieldElement) -> u64 {
        let f = &*self.residue;
        let (va, vb) = (self.valuation(a), self.valuation(b));
        let (ua, ub) = (self.unit_residue(a), self.unit_residue(b));
        let sign = if (va * vb).rem_euclid(2) == 1 { f.neg(1) } else { 1 };
        f.mul(sign, f.mul(f.pow_signed(ua, vb), f.pow_signed(ub, -va)))
    }
}

impl fmt::Display for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Padic => write!(f, "Q_{}", self.p()),
            FieldKind::Laurent => write!(f, "{}((t))", self.residue),
        }
    }
}

fn padic_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Quadratic Hilbert symbol `{a, b}`: `+1` iff `z² = ax² + by²` has a
/// nontrivial solution.
pub fn hilbert2(field: &LocalField, a: &FieldElement, b: &FieldElement) -> Result<Sign, LocalFieldError> {
    field.check(a)?;
    field.check(b)?;
    if !field.supports_quadratic_symbol() {
        return Err(LocalFieldError::UnsupportedField(format!(
            "quadratic symbols over {} (residue characteristic 2)",
            field
        )));
    }
    if field.kind == FieldKind::Padic && field.p() == 2 {
        let (alpha, beta) = (field.valuation(a), field.valuation(b));
        let (u, v) = (field.unit_mod(a, 8), field.unit_mod(b, 8));
        let eps = |x: u64| x % 4 == 3;
        let omega = |x: u64| x == 3 || x == 5;
        let odd = (eps(u) && eps(v)) ^ (alpha.rem_euclid(2) == 1 && omega(v)) ^ (beta.rem_euclid(2) == 1 && omega(u));
        return Ok(Sign::from_parity(odd));
    }
    Ok(Sign::from_parity(!field.residue.is_square(field.tame_residue(a, b))))
}

/// Degree-`m` tame symbol in `Z/m`: the discrete log, to the field's
/// primitive root, of the residue of `(−1)^{v(a)v(b)} a^{v(b)} b^{−v(a)}`,
/// reduced mod `m`.
pub fn tame_symbol(field: &LocalField, m: u64, a: &FieldElement, b: &FieldElement) -> Result<u64, LocalFieldError> {
    field.check(a)?;
    field.check(b)?;
    let q = field.q();
    if m == 0 || m.is_multiple_of(field.p()) || !(q - 1).is_multiple_of(m) {
        return Err(LocalFieldError::DegreeNotSupported { m, q });
    }
    Ok(field.residue.dlog(field.tame_residue(a, b)) % m)
}

/// `|μ_m(F)|`.
pub fn mu_count(field: &LocalField, m: u64) -> Result<u64, LocalFieldError> {
    if m == 0 {
        return Err(LocalFieldError::UnsupportedWildCase { p: field.p(), m });
    }
    if !m.is_multiple_of(field.p()) {
        return Ok(m.gcd(&(field.q() - 1)));
    }
    if field.kind == FieldKind::Padic && field.p() == 2 && m == 2 {
        return Ok(2);
    }
    Err(LocalFieldError::UnsupportedWildCase { p: field.p(), m })
}

/// `(a, s)(b, t) = (ab, st·{a, b})`.
pub fn cover_mul(field: &LocalField, x: &CoverElement, y: &CoverElement) -> Result<CoverElement, LocalFieldError> {
    let sym = hilbert2(field, &x.a, &y.a)?;
    Ok(CoverElement {
        a: field.mul(&x.a, &y.a),
        s: x.s * y.s * sym,
    })
}

/// `τ(a) = (a², {a, a})`.
pub fn tau(field: &LocalField, a: &FieldElement) -> Result<CoverElement, LocalFieldError> {
    Ok(CoverElement {
        a: field.mul(a, a),
        s: hilbert2(field, a, a)?,
    })
}

impl CoverElement {
    pub fn identity(field: &LocalField) -> Self {
        Self {
            a: field.one(),
            s: Sign::Plus,
        }
    }
}

/// Value of the Kummer-realized `f` on the marked generator `ζ` of
/// `μ_d(F)`, `d = mu_count(F, m)`: the tame symbol `{c, ζ}` of degree `d`,
/// where `ζ` reduces to `g^{(q−1)/d}` for the primitive root `g`. Returns
/// `(value, d)`.
pub fn f_table_from_kummer(field: &LocalField, m: u64, c: &FieldElement) -> Result<(u64, u64), LocalFieldError> {
    field.check(c)?;
    let d = mu_count(field, m)?;
    if d == 1 {
        return Ok((0, 1));
    }
    let q = field.q();
    if d % field.p() == 0 {
        return Err(LocalFieldError::DegreeNotSupported { m: d, q });
    }
    let res = &*field.residue;
    let zeta = res.pow(res.primitive_root(), (q - 1) / d);
    // v(ζ) = 0, so the tame residue is ζ^{−v(c)}.
    let residue = res.pow_signed(zeta, -field.valuation(c));
    Ok((res.dlog(residue) % d, d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenuineRow {
    pub torsion: u64,
    pub mu_count: u64,
    pub eps: u8,
    /// `{ε(θ), ε(θ)}` in `Z/N` (`−1 ↦ N/2`).
    pub sign_term: BigInt,
    pub f: BigInt,
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenuineTable {
    pub modulus: BigInt,
    pub minus_one_symbol: Option<Sign>,
    pub rows: Vec<GenuineRow>,
    pub vanishes: bool,
}

/// Evaluates `θ ↦ {ε(θ), ε(θ)} + [f(θ)]` on the marked generator `θ_i` of
/// each `μ_{m_i}(F)`. `eps[i]` is the bit of `ε(θ_i) ∈ {±1}` and `f[i]` the
/// value `[f(θ_i)] ∈ Z/N`.
pub fn genuine_character_obstruction(
    field: &LocalField,
    torsion: &[u64],
    eps: &[u8],
    f: &[BigInt],
    modulus: &BigInt,
) -> Result<GenuineTable, LocalFieldError> {
    if eps.len() != torsion.len() || f.len() != torsion.len() {
        return Err(LocalFieldError::InconsistentCharacter(format!(
            "{} torsion factors but {} eps values and {} f values",
            torsion.len(),
            eps.len(),
            f.len()
        )));
    }
    if !modulus.is_positive() {
        return Err(LocalFieldError::InconsistentCharacter("N must be positive".into()));
    }
    let needs_symbol = eps.iter().any(|&e| e != 0);
    let minus_one_symbol = if needs_symbol {
        let m1 = field.from_int(-1);
        Some(hilbert2(field, &m1, &m1)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(torsion.len());
    for i in 0..torsion.len() {
        let mu = mu_count(field, torsion[i])?;
        if eps[i] > 1 {
            return Err(LocalFieldError::InconsistentCharacter(format!("eps[{i}] = {} is not a bit", eps[i])));
        }
        if eps[i] == 1 && mu % 2 == 1 {
            return Err(LocalFieldError::InconsistentCharacter(format!(
                "eps[{i}] = 1 but μ_{}(F) has odd order {mu}",
                torsion[i]
            )));
        }
        let fi = f[i].mod_floor(modulus);
        if !(&fi * mu).mod_floor(modulus).is_zero() {
            return Err(LocalFieldError::InconsistentCharacter(format!(
                "f[{i}] = {fi} has order not dividing |μ_{}(F)| = {mu}",
                torsion[i]
            )));
        }
        let sign_term = match minus_one_symbol {
            Some(Sign::Minus) if eps[i] == 1 && modulus.is_even() => modulus / 2,
            _ => BigInt::zero(),
        };
        let value = (&sign_term + &fi).mod_floor(modulus);
        rows.push(GenuineRow {
            torsion: torsion[i],
            mu_count: mu,
            eps: eps[i],
            sign_term,
            f: fi,
            value,
        });
    }
    let vanishes = rows.iter().all(|r| r.value.is_zero());
    Ok(GenuineTable {
        modulus: modulus.clone(),
        minus_one_symbol,
        rows,
        vanishes,
    })
}

/// Kummer-built `f` entries for each torsion factor, embedded in `Z/N` by
/// `Z/d ≅ (N/d)Z/N`.
pub fn kummer_f_table(
    field: &LocalField,
    torsion: &[u64],
    c: &FieldElement,
    modulus: &BigInt,
) -> Result<Vec<BigInt>, LocalFieldError> {
    torsion
        .iter()
        .map(|&m| {
            let (v, d) = f_table_from_kummer(field, m, c)?;
            let d_big = BigInt::from(d);
            if !modulus.is_multiple_of(&d_big) {
                return Err(LocalFieldError::InconsistentCharacter(format!(
                    "μ_{d}(F) does not embed in Z/{modulus}"
                )));
            }
            Ok(BigInt::from(v) * (modulus / d_big))
        })
        .collect()
}
