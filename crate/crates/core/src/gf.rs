//! Arithmetic in finite fields `F_{p^m}` together with the Frobenius twist.
//!
//! Elements are stored in a packed canonical form: the coefficient vector
//! `(c_0, ..., c_{m-1})` of the residue class modulo the defining polynomial,
//! encoded as the base-`p` integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.
//! Two elements are equal exactly when their packed forms are equal.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

const MAX_DEGREE: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(i64),
    #[error("field of order {p}^{m} is too large (limit 2^32 elements)")]
    TooLarge { p: u64, m: usize },
    #[error("modulus must be monic of degree {expected}, got {got} coefficients")]
    BadModulus { expected: usize, got: usize },
    #[error("modulus {0} is reducible over F_p")]
    Reducible(String),
    #[error("cannot parse field element `{0}`")]
    Parse(String),
}

/// A field element in packed canonical form. Only meaningful together with
/// the [`FieldCtx`] that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer encoding of the coefficient vector.
    #[inline]
    pub fn packed(self) -> u32 {
        self.0
    }
}

#[derive(Debug)]
struct Inner {
    p: u64,
    m: usize,
    q: u64,
    /// Monic defining polynomial, lowest coefficient first, length `m + 1`.
    modulus: Vec<u64>,
}

/// The field `F_{p^m}`. Cheap to clone; all clones share one context.
#[derive(Clone, Debug)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(
                f,
                "F_{}^{} (modulus {})",
                self.0.p,
                self.0.m,
                render_fp_poly(&self.0.modulus)
            )
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldCtx {
    /// The prime field `Z/p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    /// Builds `F_{p^m}`. When `modulus` is omitted for `m > 1`, the first monic
    /// irreducible polynomial is taken, scanning the non-leading coefficient
    /// vectors `(c_0, ..., c_{m-1})` as base-`p` integers `c_0 + c_1 p + ...`
    /// in increasing order.
    ///
    /// A supplied modulus lists coefficients lowest degree first and must end
    /// in the leading `1`.
    pub fn new(p: u64, m: i64, modulus: Option<&[i64]>) -> Result<Self, FieldError> {
        if m < 1 {
            return Err(FieldError::BadDegree(m));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let m = m as usize;
        let q = checked_order(p, m).ok_or(FieldError::TooLarge { p, m })?;
        let modulus = match (m, modulus) {
            (1, None) => vec![0, 1],
            (_, Some(coeffs)) => {
                if coeffs.len() != m + 1 {
                    return Err(FieldError::BadModulus {
                        expected: m,
                        got: coeffs.len(),
                    });
                }
                let reduced: Vec<u64> = coeffs
                    .iter()
                    .map(|&c| c.rem_euclid(p as i64) as u64)
                    .collect();
                if reduced[m] != 1 {
                    return Err(FieldError::BadModulus {
                        expected: m,
                        got: coeffs.len(),
                    });
                }
                if !fp_is_irreducible(&reduced, p) {
                    return Err(FieldError::Reducible(render_fp_poly(&reduced)));
                }
                reduced
            }
            (_, None) => find_irreducible(p, m),
        };
        Ok(FieldCtx(Arc::new(Inner { p, m, q, modulus })))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Extension degree `m`.
    #[inline]
    pub fn degree(&self) -> usize {
        self.0.m
    }

    /// Number of elements `p^m`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Image of an integer under `Z -> F_p ⊂ F_{p^m}`.
    #[inline]
    pub fn from_int(&self, v: i64) -> FieldElem {
        FieldElem(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given coefficient vector (lowest power first).
    /// Longer vectors are reduced modulo the defining polynomial.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElem {
        let p = self.0.p;
        let mut digits: Vec<u64> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        fp_rem_in_place(&mut digits, &self.0.modulus, p);
        self.pack(&digits)
    }

    /// Element with packed encoding `code`; `None` if out of range.
    pub fn from_packed(&self, code: u64) -> Option<FieldElem> {
        (code < self.0.q).then_some(FieldElem(code as u32))
    }

    /// Coefficient vector of length `m`.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        let mut out = vec![0u64; self.0.m];
        let mut v = x.0 as u64;
        for c in out.iter_mut() {
            *c = v % self.0.p;
            v /= self.0.p;
        }
        out
    }

    #[inline]
    fn unpack(&self, x: FieldElem, out: &mut [u64; MAX_DEGREE]) {
        let mut v = x.0 as u64;
        for c in out.iter_mut().take(self.0.m) {
            *c = v % self.0.p;
            v /= self.0.p;
        }
    }

    fn pack(&self, digits: &[u64]) -> FieldElem {
        let mut v = 0u64;
        for &c in digits.iter().take(self.0.m).rev() {
            v = v * self.0.p + c;
        }
        FieldElem(v as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.0.p;
        if self.0.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FieldElem(if s >= p { s - p } else { s } as u32);
        }
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        for i in 0..self.0.m {
            x[i] = (x[i] + y[i]) % p;
        }
        self.pack(&x[..self.0.m])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.0.p;
        if self.0.m == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { (p - a.0 as u64) as u32 });
        }
        let mut x = [0u64; MAX_DEGREE];
        self.unpack(a, &mut x);
        for c in x.iter_mut().take(self.0.m) {
            *c = (p - *c) % p;
        }
        self.pack(&x[..self.0.m])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.0.p;
        if self.0.m == 1 {
            return FieldElem((a.0 as u64 * b.0 as u64 % p) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let m = self.0.m;
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        let mut prod = vec![0u64; 2 * m - 1];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        fp_rem_in_place(&mut prod, &self.0.modulus, p);
        self.pack(&prod)
    }

    /// `a * b + c`.
    #[inline]
    pub fn mul_add(&self, a: FieldElem, b: FieldElem, c: FieldElem) -> FieldElem {
        if self.0.m == 1 {
            let p = self.0.p;
            return FieldElem(((a.0 as u64 * b.0 as u64 + c.0 as u64) % p) as u32);
        }
        self.add(self.mul(a, b), c)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let p = self.0.p;
        if self.0.m == 1 {
            return Some(FieldElem(inv_mod(a.0 as u64, p) as u32));
        }
        // Extended Euclid on (a, modulus) over F_p.
        let mut r0 = self.0.modulus.clone();
        let mut r1 = self.coeffs(a);
        fp_trim(&mut r1);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !(r1.len() == 1 && r1[0] != 0) {
            let (quot, rem) = fp_divmod(&r0, &r1, p);
            let next = fp_sub(&s0, &fp_mul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, next);
        }
        let scale = inv_mod(r1[0], p);
        let mut out: Vec<u64> = s1.iter().map(|&c| c * scale % p).collect();
        fp_rem_in_place(&mut out, &self.0.modulus, p);
        Some(self.pack(&out))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `x^{p^k}`; negative `k` applies the inverse twist `|k|` times.
    pub fn frobenius(&self, x: FieldElem, k: i64) -> FieldElem {
        let m = self.0.m as i64;
        if m == 1 || x.is_zero() {
            return x;
        }
        let k = k.rem_euclid(m);
        let mut y = x;
        for _ in 0..k {
            y = self.pow(y, self.0.p);
        }
        y
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.0.q) as u32)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(1..self.0.q) as u32)
    }

    /// All field elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.0.q as u32).map(FieldElem)
    }

    /// Integer for prime fields, comma-separated coefficients otherwise.
    pub fn render(&self, x: FieldElem) -> String {
        if self.0.m == 1 {
            x.0.to_string()
        } else {
            self.coeffs(x)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Inverse of [`FieldCtx::render`]: an integer (reduced mod `p`) or a
    /// comma-separated coefficient vector.
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem, FieldError> {
        let parts: Result<Vec<i64>, _> = text.split(',').map(|s| s.trim().parse::<i64>()).collect();
        match parts {
            Ok(v) if !v.is_empty() => Ok(self.from_coeffs(&v)),
            _ => Err(FieldError::Parse(text.to_string())),
        }
    }
}

fn checked_order(p: u64, m: usize) -> Option<u64> {
    if m > MAX_DEGREE {
        return None;
    }
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.checked_mul(p)?;
    }
    (q <= u32::MAX as u64).then_some(q)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u64
}

// Dense polynomials over F_p, lowest coefficient first.

fn fp_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
}

fn fp_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![0];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(&mut out);
    out
}

fn fp_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut b = b.to_vec();
    fp_trim(&mut b);
    let mut rem = a.to_vec();
    fp_trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    if rem.len() < b.len() {
        return (vec![0], rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db] * lead_inv % p;
        quot[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - c * bj % p) % p;
            }
        }
    }
    rem.truncate(db.max(1));
    fp_trim(&mut rem);
    fp_trim(&mut quot);
    (quot, rem)
}

/// Reduces `a` modulo the monic `modulus` in place, leaving `deg(modulus)` coefficients.
fn fp_rem_in_place(a: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let m = modulus.len() - 1;
    for k in (m..a.len()).rev() {
        let c = a[k];
        if c == 0 {
            continue;
        }
        for j in 0..m {
            a[k - m + j] = (a[k - m + j] + p - c * modulus[j] % p) % p;
        }
        a[k] = 0;
    }
    a.resize(m.max(1), 0);
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !fp_is_zero(&y) {
        let (_, r) = fp_divmod(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    x
}

fn fp_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let mut prod = fp_mul(a, b, p);
    fp_rem_in_place(&mut prod, modulus, p);
    prod
}

/// Irreducibility of a monic polynomial: no common factor with
/// `x^{p^k} - x` for `1 <= k <= deg/2`.
fn fp_is_irreducible(modulus: &[u64], p: u64) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    let mut h: Vec<u64> = vec![0, 1];
    for _ in 1..=m / 2 {
        // h <- h^p mod modulus
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, modulus, p);
            }
            base = fp_mulmod(&base, &base, modulus, p);
            e >>= 1;
        }
        h = acc;
        let diff = fp_sub(&h, &[0, 1], p);
        let g = fp_gcd(modulus, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn find_irreducible(p: u64, m: usize) -> Vec<u64> {
    let tails = p.pow(m as u32);
    for code in 0..tails {
        let mut coeffs = vec![0u64; m + 1];
        let mut v = code;
        for c in coeffs.iter_mut().take(m) {
            *c = v % p;
            v /= p;
        }
        coeffs[m] = 1;
        if coeffs[0] != 0 && fp_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

fn render_fp_poly(c: &[u64]) -> String {
    c.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
