//! Table-driven arithmetic in the small finite fields GF(p^r).
//!
//! An element is a dense index in `0..q`. For `q = p^r` the index is the
//! base-`p` encoding of the coefficient vector of a polynomial of degree
//! `< r`, i.e. index `c_0 + c_1 p + c_2 p^2`. The fields are built modulo
//! the following fixed (Conway) polynomials, so the indexing is
//! reproducible:
//!
//! | field | modulus        |
//! |-------|----------------|
//! | GF(4) | x^2 + x + 1    |
//! | GF(8) | x^3 + x + 1    |
//! | GF(9) | x^2 + 2x + 2   |
//!
//! With these moduli the element `x` (index `p`) is a primitive element.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field element index.
pub type Elem = u8;

/// Coordinates `x_0..x_6` of a vector of `F_q^7`.
pub type Vec7 = [Elem; 7];

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u8,
    r: u8,
    q: u8,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    frobenius: Vec<Elem>,
    modulus: Vec<u8>,
}

/// Description of the field model, recorded in export manifests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldModel {
    pub p: u8,
    pub r: u8,
    pub q: u8,
    /// Monic modulus, coefficients from the constant term upwards. Empty for prime fields.
    pub modulus: Vec<u8>,
}

fn modulus_for(p: u8, r: u8) -> Option<Vec<u8>> {
    match (p, r) {
        (_, 1) => Some(Vec::new()),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![2, 2, 1]),
        _ => None,
    }
}

impl FiniteField {
    /// Builds GF(p^r). Supported: p in {2, 3, 5, 7}, 1 <= r <= 3, p^r <= 16.
    pub fn new(p: u8, r: u8) -> Result<Self> {
        if ![2, 3, 5, 7].contains(&p) || !(1..=3).contains(&r) {
            return Err(Error::Config(format!(
                "GF({p}^{r}) unsupported: need p in {{2,3,5,7}} and 1 <= r <= 3 with p^r <= 16"
            )));
        }
        let q = (p as u32).pow(r as u32);
        if q > 16 {
            return Err(Error::Config(format!(
                "GF({p}^{r}) unsupported: field size {q} exceeds the limit 16"
            )));
        }
        let modulus = modulus_for(p, r)
            .ok_or_else(|| Error::Config(format!("GF({p}^{r}) unsupported: no modulus pinned")))?;
        let q = q as u8;
        let n = q as usize;

        let digits = |x: usize| -> Vec<u8> {
            let mut v = vec![0u8; r as usize];
            let mut x = x;
            for d in v.iter_mut() {
                *d = (x % p as usize) as u8;
                x /= p as usize;
            }
            v
        };
        let encode = |d: &[u8]| -> Elem {
            d.iter()
                .rev()
                .fold(0usize, |acc, &c| acc * p as usize + c as usize) as Elem
        };

        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let sum: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = encode(&sum);

                // schoolbook product then reduction modulo the monic modulus
                let mut prod = vec![0u32; 2 * r as usize - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] += x as u32 * y as u32;
                    }
                }
                for k in (r as usize..prod.len()).rev() {
                    let c = prod[k] % p as u32;
                    if c != 0 {
                        for (i, &m) in modulus[..r as usize].iter().enumerate() {
                            let shift = k - r as usize + i;
                            prod[shift] += (p as u32 - m as u32 % p as u32) % p as u32 * c;
                        }
                    }
                    prod[k] = 0;
                }
                let red: Vec<u8> = prod[..r as usize]
                    .iter()
                    .map(|&c| (c % p as u32) as u8)
                    .collect();
                mul[a * n + b] = encode(&red);
            }
        }

        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).unwrap() as Elem;
            if a != 0 {
                inv[a] = (1..n)
                    .find(|&b| mul[a * n + b] == 1)
                    .ok_or_else(|| Error::Internal(format!("GF({q}): {a} has no inverse")))?
                    as Elem;
            }
        }
        let frobenius = (0..n)
            .map(|a| {
                let mut x: Elem = 1;
                for _ in 0..p {
                    x = mul[x as usize * n + a];
                }
                x
            })
            .collect();

        Ok(FiniteField {
            p,
            r,
            q,
            add,
            mul,
            neg,
            inv,
            frobenius,
            modulus,
        })
    }

    /// Builds the field of order `q`.
    pub fn of_order(q: u32) -> Result<Self> {
        for p in [2u8, 3, 5, 7] {
            let mut r = 0u8;
            let mut x = q;
            while x > 1 && x.is_multiple_of(p as u32) {
                x /= p as u32;
                r += 1;
            }
            if x == 1 && r >= 1 {
                return FiniteField::new(p, r);
            }
        }
        Err(Error::Config(format!(
            "no supported field of order {q} (need a power of 2, 3, 5 or 7 up to 16)"
        )))
    }

    pub fn p(&self) -> u8 {
        self.p
    }
    pub fn r(&self) -> u8 {
        self.r
    }
    pub fn q(&self) -> u8 {
        self.q
    }
    pub fn size(&self) -> usize {
        self.q as usize
    }

    pub fn model(&self) -> FieldModel {
        FieldModel {
            p: self.p,
            r: self.r,
            q: self.q,
            modulus: self.modulus.clone(),
        }
    }

    /// Human readable modulus, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        if self.modulus.is_empty() {
            return format!("prime field Z/{}", self.p);
        }
        let mut terms = Vec::new();
        for (k, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            let term = match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }
    /// Multiplicative inverse. `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }
    /// The Frobenius map `x -> x^p`.
    #[inline]
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.frobenius[a as usize]
    }

    pub fn pow(&self, a: Elem, e: u32) -> Elem {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// Smallest element generating the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        let n = self.q as u32 - 1;
        (1..self.q)
            .find(|&g| (1..n).all(|e| self.pow(g, e) != 1))
            .expect("finite field has a primitive element")
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// `Q(x) = x0 x4 + x1 x5 + x2 x6 - x3^2`.
    pub fn eval_quadric(&self, x: &Vec7) -> Elem {
        let a = self.mul(x[0], x[4]);
        let b = self.mul(x[1], x[5]);
        let c = self.mul(x[2], x[6]);
        let d = self.mul(x[3], x[3]);
        self.sub(self.add(self.add(a, b), c), d)
    }

    /// Polar form `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn polar_form(&self, x: &Vec7, y: &Vec7) -> Elem {
        let t = |i: usize, j: usize| self.add(self.mul(x[i], y[j]), self.mul(x[j], y[i]));
        let d = self.mul(x[3], y[3]);
        let d2 = self.add(d, d);
        self.sub(self.add(self.add(t(0, 4), t(1, 5)), t(2, 6)), d2)
    }

    pub fn scale(&self, lambda: Elem, x: &[Elem]) -> Vec<Elem> {
        x.iter().map(|&c| self.mul(lambda, c)).collect()
    }

    /// Scales `x` so that its first nonzero coordinate is 1. Returns `None` for the zero vector.
    pub fn normalize(&self, x: &[Elem]) -> Option<Vec<Elem>> {
        let lead = *x.iter().find(|&&c| c != 0)?;
        Some(self.scale(self.inv(lead), x))
    }

    pub fn dot(&self, x: &[Elem], y: &[Elem]) -> Elem {
        x.iter()
            .zip(y)
            .fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }
}

/// All normalized (first nonzero coordinate = 1) vectors of `F_q^n` in
/// lexicographic order, i.e. one representative per projective point.
pub fn projective_points(field: &FiniteField, n: usize) -> Vec<Vec<Elem>> {
    let q = field.size();
    let mut out = Vec::new();
    let mut v = vec![0 as Elem; n];
    loop {
        if let Some(&lead) = v.iter().find(|&&c| c != 0) {
            if lead == 1 {
                out.push(v.clone());
            }
        }
        // odometer with the last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            v[k] += 1;
            if (v[k] as usize) < q {
                break;
            }
            v[k] = 0;
        }
    }
}
