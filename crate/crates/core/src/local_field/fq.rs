//! Finite fields `F_q = F_p[x]/(f)`. Elements are encoded as integers
//! `Σ c_i p^i ∈ [0, q)` where `Σ c_i x^i` is the reduced polynomial, so the
//! prime field is `{0, …, p−1}` with its usual arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use super::LocalFieldError;

const DLOG_TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug)]
pub struct FiniteField {
    p: u64,
    degree: usize,
    q: u64,
    /// Monic modulus, low degree first, length `degree + 1`.
    modulus: Vec<u64>,
    primitive: OnceLock<u64>,
    dlog_table: OnceLock<Vec<u32>>,
}

impl Clone for FiniteField {
    fn clone(&self) -> Self {
        Self::from_parts(self.p, self.modulus.clone())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut k = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        k += 1;
    }
    Some((p, k))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl FiniteField {
    fn from_parts(p: u64, modulus: Vec<u64>) -> Self {
        let degree = modulus.len() - 1;
        Self {
            p,
            degree,
            q: p.pow(degree as u32),
            modulus,
            primitive: OnceLock::new(),
            dlog_table: OnceLock::new(),
        }
    }

    pub fn prime(p: u64) -> Result<Self, LocalFieldError> {
        if !is_prime(p) {
            return Err(LocalFieldError::UnsupportedField(format!("{p} is not prime")));
        }
        Ok(Self::from_parts(p, vec![0, 1]))
    }

    /// `F_q` with the smallest monic irreducible modulus (by encoding of the
    /// lower coefficients).
    pub fn new(q: u64) -> Result<Self, LocalFieldError> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| LocalFieldError::UnsupportedField(format!("{q} is not a prime power")))?;
        if k == 1 {
            return Self::prime(p);
        }
        if q.checked_mul(q).is_none() {
            return Err(LocalFieldError::UnsupportedField(format!("F_{q} is too large")));
        }
        for code in 0..q {
            let mut m = digits(code, p, k);
            m.push(1);
            if is_irreducible(&m, p) {
                return Ok(Self::from_parts(p, m));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `F_q` with an explicit modulus such as `x^2+x+2`.
    pub fn with_modulus(q: u64, modulus: &str) -> Result<Self, LocalFieldError> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| LocalFieldError::UnsupportedField(format!("{q} is not a prime power")))?;
        let m = parse_poly(modulus, p)?;
        if m.len() != k + 1 || m[k] != 1 {
            return Err(LocalFieldError::BadModulus(format!(
                "{modulus} is not a monic polynomial of degree {k}"
            )));
        }
        if !is_irreducible(&m, p) {
            return Err(LocalFieldError::BadModulus(format!("{modulus} is reducible over F_{p}")));
        }
        Ok(Self::from_parts(p, m))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        poly_to_string(&self.modulus)
    }

    /// Reduces an integer into the prime field.
    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.degree == 1 {
            return (a + b) % self.p;
        }
        let (x, y) = (digits(a, self.p, self.degree), digits(b, self.p, self.degree));
        encode(&x.iter().zip(&y).map(|(s, t)| (s + t) % self.p).collect::<Vec<_>>(), self.p)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.degree == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let x = digits(a, self.p, self.degree);
        encode(&x.iter().map(|s| (self.p - s) % self.p).collect::<Vec<_>>(), self.p)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.degree == 1 {
            return mulmod(a, b, self.p);
        }
        let (x, y) = (digits(a, self.p, self.degree), digits(b, self.p, self.degree));
        let mut prod = vec![0u64; 2 * self.degree];
        for (i, &s) in x.iter().enumerate() {
            for (j, &t) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(s, t, self.p)) % self.p;
            }
        }
        encode(&poly_rem(prod, &self.modulus, self.p), self.p)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for any integer exponent; `a ≠ 0` when `e < 0`.
    pub fn pow_signed(&self, a: u64, e: i64) -> u64 {
        let r = self.pow(a, e.unsigned_abs() % (self.q - 1));
        if e < 0 {
            self.inv(r)
        } else {
            r
        }
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.q - 2)
    }

    /// Smallest encoding generating `F_q×`.
    pub fn primitive_root(&self) -> u64 {
        *self.primitive.get_or_init(|| {
            if self.q == 2 {
                return 1;
            }
            let factors = prime_factors(self.q - 1);
            (1..self.q)
                .find(|&g| factors.iter().all(|r| self.pow(g, (self.q - 1) / r) != 1))
                .expect("F_q× is cyclic")
        })
    }

    /// Discrete logarithm to the base [`Self::primitive_root`], in `[0, q−1)`.
    pub fn dlog(&self, a: u64) -> u64 {
        assert!(a != 0, "discrete log of zero");
        if self.q <= DLOG_TABLE_LIMIT {
            let table = self.dlog_table.get_or_init(|| {
                let g = self.primitive_root();
                let mut t = vec![0u32; self.q as usize];
                let mut x = 1u64;
                for k in 0..self.q - 1 {
                    t[x as usize] = k as u32;
                    x = self.mul(x, g);
                }
                t
            });
            return table[a as usize] as u64;
        }
        self.bsgs(a)
    }

    fn bsgs(&self, a: u64) -> u64 {
        let n = self.q - 1;
        let m = (n as f64).sqrt().ceil() as u64 + 1;
        let g = self.primitive_root();
        let mut baby = HashMap::with_capacity(m as usize);
        let mut x = 1u64;
        for j in 0..m {
            baby.entry(x).or_insert(j);
            x = self.mul(x, g);
        }
        let giant = self.inv(self.pow(g, m));
        let mut y = a;
        for i in 0..m {
            if let Some(j) = baby.get(&y) {
                return (i * m + j) % n;
            }
            y = self.mul(y, giant);
        }
        unreachable!("every nonzero element is a power of the primitive root")
    }

    /// Euler's criterion; `q` odd.
    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.pow(a, (self.q - 1) / 2) == 1
    }

    /// Parses an element: a nonnegative encoding below `q`, or any integer
    /// taken in the prime field when negative.
    pub fn parse_element(&self, s: &str) -> Result<u64, LocalFieldError> {
        let n: i64 = s
            .trim()
            .parse()
            .map_err(|_| LocalFieldError::Parse(format!("bad coefficient '{s}'")))?;
        if n >= 0 && (n as u64) < self.q {
            Ok(n as u64)
        } else {
            Ok(self.from_int(n))
        }
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "F_{}", self.q)
        } else {
            write!(f, "F_{} = F_{}[x]/({})", self.q, self.p, self.modulus_string())
        }
    }
}

fn digits(mut a: u64, p: u64, k: usize) -> Vec<u64> {
    let mut d = Vec::with_capacity(k);
    for _ in 0..k {
        d.push(a % p);
        a /= p;
    }
    d
}

fn encode(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo `m` over `F_p`, padded to `deg(m)` digits.
fn poly_rem(a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    let mut a = trim(a);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = mulmod(a[top], lead_inv, p);
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                a[idx] = (a[idx] + p - mulmod(c, mi, p)) % p;
            }
        }
        a.pop();
        a = trim(a);
    }
    a.resize(dm, 0);
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &s) in a.iter().enumerate() {
        for (j, &t) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(s, t, p)) % p;
        }
    }
    poly_rem(prod, m, p)
}

fn poly_gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = trim(poly_rem(a.clone(), &b, p));
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `f | x^{p^k} − x` and `gcd(f, x^{p^{k/r}} − x) = 1` for
/// each prime `r | k`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let frob_power = |times: usize| {
        let mut x = poly_rem(vec![0, 1], f, p);
        for _ in 0..times {
            let mut acc = poly_rem(vec![1], f, p);
            let mut base = x.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, f, p);
                }
                base = poly_mulmod(&base, &base, f, p);
                e >>= 1;
            }
            x = acc;
        }
        x
    };
    let minus_x = |mut v: Vec<u64>| {
        v[1] = (v[1] + p - 1) % p;
        v
    };
    if !trim(minus_x(frob_power(k))).is_empty() {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|r| {
        let h = minus_x(frob_power(k / r as usize));
        poly_gcd(f.to_vec(), h, p).len() == 1
    })
}

/// Parses `x^2+x+2`, `x^3 + 2x + 1`, `2*x^2 - 1` over `F_p`.
pub fn parse_poly(s: &str, p: u64) -> Result<Vec<u64>, LocalFieldError> {
    let err = || LocalFieldError::BadModulus(format!("cannot parse polynomial '{s}'"));
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err());
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut coeffs: Vec<u64> = Vec::new();
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t.strip_prefix('+').unwrap_or(&t)),
        };
        let (c, e): (i64, usize) = match body.find('x') {
            None => (body.parse().map_err(|_| err())?, 0),
            Some(pos) => {
                let cpart = body[..pos].trim_end_matches('*');
                let c = if cpart.is_empty() { 1 } else { cpart.parse().map_err(|_| err())? };
                let rest = &body[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(err)?.parse().map_err(|_| err())?
                };
                (c, e)
            }
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        let c = if neg { -c } else { c };
        coeffs[e] = (coeffs[e] + c.rem_euclid(p as i64) as u64) % p;
    }
    Ok(trim(coeffs))
}

fn poly_to_string(c: &[u64]) -> String {
    let mut parts = Vec::new();
    for (e, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let coef = if a == 1 && e > 0 { String::new() } else { a.to_string() };
        parts.push(match e {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{e}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f = FiniteField::prime(5).unwrap();
        assert_eq!(f.primitive_root(), 2);
        assert_eq!(f.dlog(3), 3);
        assert_eq!(f.dlog(4), 2);
        assert_eq!(f.inv(2), 3);
        assert!(f.is_square(4) && !f.is_square(2));
        assert_eq!(FiniteField::prime(7).unwrap().primitive_root(), 3);
        assert!(FiniteField::prime(9).is_err());
    }

    #[test]
    fn extension_fields() {
        let f = FiniteField::with_modulus(9, "x^2+x+2").unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(f.modulus_string(), "x^2+x+2");
        let g = f.primitive_root();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1;
        for k in 0..8 {
            assert_eq!(f.dlog(x), k);
            seen.insert(x);
            x = f.mul(x, g);
        }
        assert_eq!(seen.len(), 8);
        for a in 1..9 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        // x^2+1 is irreducible over F_3 and is the first candidate found.
        assert_eq!(FiniteField::new(9).unwrap().modulus_string(), "x^2+1");
        assert!(FiniteField::with_modulus(9, "x^2+2").is_err());
        assert!(FiniteField::new(25).is_ok());
        assert_eq!(FiniteField::new(8).unwrap().degree(), 3);
    }

    #[test]
    fn bsgs_matches_table() {
        let f = FiniteField::prime(101).unwrap();
        for a in 1..101 {
            assert_eq!(f.bsgs(a), f.dlog(a));
        }
    }

    #[test]
    fn poly_parsing() {
        assert_eq!(parse_poly("x^2+x+2", 3).unwrap(), vec![2, 1, 1]);
        assert_eq!(parse_poly("x^3 - 1", 5).unwrap(), vec![4, 0, 0, 1]);
        assert_eq!(parse_poly("2*x^2 + 3x", 7).unwrap(), vec![0, 3, 2]);
        assert!(parse_poly("y+1", 3).is_err());
    }
}
