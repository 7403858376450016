//! Brute-force oracle for the quadratic Hilbert symbol: `{a, b} = +1` iff
//! `z² = a x² + b y²` has a nonzero solution, decided by a Hensel-liftable
//! primitive solution modulo `π^k`.
//!
//! Only `Q_p` and `F_p((t))` with `p` prime are handled; both residue rings
//! `O/π^k` are encoded as integers in `[0, p^k)` (for `F_p[t]/t^k` the
//! base-`p` digits are the coefficients), so `π` is encoded as `p` in both.

use metacover::local_field::{FieldElement, FieldKind, LocalField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

struct Ring {
    p: u64,
    k: u32,
    size: u64,
    poly: bool,
}

impl Ring {
    fn digits(&self, mut a: u64) -> Vec<u64> {
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn pack(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        if !self.poly {
            return (a + b) % self.size;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.pack(&s)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if !self.poly {
            return a * b % self.size;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut out = vec![0u64; k];
        for i in 0..k {
            for j in 0..k - i {
                out[i + j] = (out[i + j] + x[i] * y[j]) % self.p;
            }
        }
        self.pack(&out)
    }

    /// `π`-adic valuation, `k` for zero.
    fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut a = a;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    fn inv(&self, a: u64) -> u64 {
        (1..self.size).find(|&x| self.mul(a, x) == 1).expect("unit")
    }
}

fn vp(x: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut x = x.clone();
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    (v, x)
}

/// Valuation and the residue of the unit part modulo `π^k`.
fn decompose(field: &LocalField, ring: &Ring, a: &FieldElement) -> (i64, u64) {
    match a {
        FieldElement::Rational(r) => {
            let p = BigInt::from(ring.p);
            let (vn, un) = vp(r.numer(), &p);
            let (vd, ud) = vp(r.denom(), &p);
            let m = BigInt::from(ring.size);
            let num = un.mod_floor(&m).to_u64().unwrap();
            let den = ud.mod_floor(&m).to_u64().unwrap();
            (vn - vd, ring.mul(num, ring.inv(den)))
        }
        FieldElement::Laurent(l) => {
            assert_eq!(field.q(), field.p(), "oracle needs a prime residue field");
            let mut d: Vec<u64> = l.coeffs().iter().take(ring.k as usize).copied().collect();
            d.resize(ring.k as usize, 0);
            (l.valuation(), ring.pack(&d))
        }
    }
}

/// Precision `k` such that every solvable conic with `v(a), v(b) ∈ {0, 1}`
/// has a primitive solution whose partial derivatives have valuation at
/// most `(k − 1)/2`.
fn precision(p: u64) -> u32 {
    if p == 2 {
        6
    } else {
        3
    }
}

/// `{a, b}` as `±1`, by searching for a liftable primitive point.
pub fn hilbert_oracle(field: &LocalField, a: &FieldElement, b: &FieldElement) -> i8 {
    let p = field.p();
    let poly = field.kind() == FieldKind::Laurent;
    let k = precision(p);
    let ring = Ring {
        p,
        k,
        size: p.pow(k),
        poly,
    };
    let v2 = if p == 2 && !poly { 1 } else { 0 };
    let scaled = |x: &FieldElement| {
        let (v, u) = decompose(field, &ring, x);
        if v.rem_euclid(2) == 1 {
            ring.mul(u, p)
        } else {
            u
        }
    };
    let (a, b) = (scaled(a), scaled(b));

    let mut min_root_val: Vec<Option<u32>> = vec![None; ring.size as usize];
    for z in 0..ring.size {
        let r = ring.mul(z, z) as usize;
        let v = ring.val(z);
        min_root_val[r] = Some(min_root_val[r].map_or(v, |w: u32| w.min(v)));
    }

    let nonunits: Vec<u64> = (0..ring.size).filter(|&x| x % p == 0).collect();
    let all: Vec<u64> = (0..ring.size).collect();
    let one = [1u64];
    let cases: [(&[u64], &[u64]); 3] = [(&one, &all), (&nonunits, &one), (&nonunits, &nonunits)];
    for (xs, ys) in cases {
        for &x in xs {
            for &y in ys {
                let ax = ring.mul(a, x);
                let by = ring.mul(b, y);
                let r = ring.add(ring.mul(ax, x), ring.mul(by, y));
                let Some(vz) = min_root_val[r as usize] else { continue };
                if x % p == 0 && y % p == 0 && vz > 0 {
                    continue;
                }
                let e = v2 + ring.val(ax).min(ring.val(by)).min(vz);
                if 2 * e < k {
                    return 1;
                }
            }
        }
    }
    -1
}
