//! Nonzero Laurent polynomials `Σ c_k t^k` over a finite field.

use std::fmt;

use super::fq::FiniteField;
use super::LocalFieldError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    /// Valuation: the exponent of `coeffs[0]`.
    low: i64,
    /// `coeffs[0]` and the last entry are nonzero.
    coeffs: Vec<u64>,
}

impl LaurentPoly {
    /// Normalizes `Σ coeffs[i] t^{low+i}`; `None` for the zero polynomial.
    pub fn new(low: i64, coeffs: Vec<u64>) -> Option<Self> {
        let start = coeffs.iter().position(|&c| c != 0)?;
        let end = coeffs.iter().rposition(|&c| c != 0)? + 1;
        Some(Self {
            low: low + start as i64,
            coeffs: coeffs[start..end].to_vec(),
        })
    }

    pub fn constant(c: u64) -> Option<Self> {
        Self::new(0, vec![c])
    }

    pub fn monomial(c: u64, k: i64) -> Option<Self> {
        Self::new(k, vec![c])
    }

    pub fn valuation(&self) -> i64 {
        self.low
    }

    /// Leading coefficient of the unit part, i.e. the residue of
    /// `t^{−v} · self`.
    pub fn residue(&self) -> u64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Self, f: &FiniteField) -> Self {
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(self.low + other.low, out).expect("F_q((t)) has no zero divisors")
    }

    /// `self + other`, or `None` if the sum vanishes.
    pub fn add(&self, other: &Self, f: &FiniteField) -> Option<Self> {
        let low = self.low.min(other.low);
        let high = (self.low + self.coeffs.len() as i64).max(other.low + other.coeffs.len() as i64);
        let mut out = vec![0u64; (high - low) as usize];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let k = (self.low - low) as usize + i;
            out[k] = f.add(out[k], a);
        }
        for (i, &b) in other.coeffs.iter().enumerate() {
            let k = (other.low - low) as usize + i;
            out[k] = f.add(out[k], b);
        }
        Self::new(low, out)
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        Self {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    /// Parses `t`, `t^k`, an integer constant, or `deg:coeff,deg:coeff,…`.
    pub fn parse(s: &str, f: &FiniteField) -> Result<Self, LocalFieldError> {
        let s = s.trim();
        let bad = || LocalFieldError::Parse(format!("cannot parse Laurent polynomial '{s}'"));
        let out = if s == "t" {
            Self::monomial(1, 1)
        } else if let Some(k) = s.strip_prefix("t^") {
            Self::monomial(1, k.parse().map_err(|_| bad())?)
        } else if s.contains(':') {
            let mut terms: Vec<(i64, u64)> = Vec::new();
            for part in s.split(',') {
                let (d, c) = part.split_once(':').ok_or_else(bad)?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                terms.push((d, f.parse_element(c)?));
            }
            let low = terms.iter().map(|t| t.0).min().ok_or_else(bad)?;
            let high = terms.iter().map(|t| t.0).max().ok_or_else(bad)?;
            let mut coeffs = vec![0u64; (high - low + 1) as usize];
            for (d, c) in terms {
                let k = (d - low) as usize;
                coeffs[k] = f.add(coeffs[k], c);
            }
            Self::new(low, coeffs)
        } else {
            Self::constant(f.parse_element(s)?)
        };
        out.ok_or(LocalFieldError::ZeroElement)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| format!("{}:{c}", self.low + i as i64))
            .collect();
        write!(f, "{}", terms.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_parsing() {
        let f = FiniteField::prime(5).unwrap();
        let t = LaurentPoly::parse("t", &f).unwrap();
        let a = LaurentPoly::parse("0:1,1:4", &f).unwrap();
        assert_eq!(a.valuation(), 0);
        assert_eq!(t.mul(&a, &f).to_string(), "1:1,2:4");
        let inv_t = LaurentPoly::parse("t^-1", &f).unwrap();
        assert_eq!(t.mul(&inv_t, &f), LaurentPoly::constant(1).unwrap());
        assert!(a.add(&a.neg(&f), &f).is_none());
        assert_eq!(LaurentPoly::parse("-1", &f).unwrap().residue(), 4);
        assert_eq!(LaurentPoly::parse("0:0,2:3", &f).unwrap().valuation(), 2);
        assert!(matches!(LaurentPoly::parse("0", &f), Err(LocalFieldError::ZeroElement)));
    }
}
