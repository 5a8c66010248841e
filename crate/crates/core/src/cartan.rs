//! Finite root data for types A1, A2 and B2.
//!
//! Weights are integer vectors in the fundamental-weight basis; elements of the
//! root lattice `Q` are kept separately in simple-root coordinates. Simple
//! indices are 0-based internally and 1-based in every textual interface.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{QExp, EXP_DENOM};

pub const MAX_RANK: usize = 2;

/// A weight in fundamental-weight coordinates; unused coordinates are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Weight(pub [i64; MAX_RANK]);

/// An element of the root lattice in simple-root coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct RootVec(pub [i64; MAX_RANK]);

macro_rules! lattice_ops {
    ($t:ident) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                $t([self.0[0] + o.0[0], self.0[1] + o.0[1]])
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                $t([self.0[0] - o.0[0], self.0[1] - o.0[1]])
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t([-self.0[0], -self.0[1]])
            }
        }
        impl Mul<$t> for i64 {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                $t([self * o.0[0], self * o.0[1]])
            }
        }
        impl $t {
            pub const ZERO: $t = $t([0, 0]);

            pub fn unit(i: usize) -> $t {
                let mut c = [0; MAX_RANK];
                c[i] = 1;
                $t(c)
            }

            pub fn is_zero(&self) -> bool {
                self.0 == [0, 0]
            }
        }
    };
}

lattice_ops!(Weight);
lattice_ops!(RootVec);

impl RootVec {
    pub fn height(&self) -> i64 {
        self.0[0] + self.0[1]
    }

    /// Membership in `Q⁺`.
    pub fn is_nonneg(&self) -> bool {
        self.0[0] >= 0 && self.0[1] >= 0
    }

    pub fn le(&self, o: &RootVec) -> bool {
        (*o - *self).is_nonneg()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A1,
    A2,
    B2,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A1 => 1,
            CartanType::A2 | CartanType::B2 => 2,
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(CartanType::A1),
            "A2" => Ok(CartanType::A2),
            "B2" => Ok(CartanType::B2),
            "G2" => Err(Error::Config("type G2 is not shipped".into())),
            other => Err(Error::Config(format!("unknown Cartan type `{other}`"))),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A1 => "A1",
            CartanType::A2 => "A2",
            CartanType::B2 => "B2",
        };
        f.write_str(s)
    }
}

/// Positive roots listed in the order induced by a reduced word for `w₀`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexOrder {
    /// 0-based simple indices.
    pub word: Vec<usize>,
    pub roots: Vec<RootVec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    pub ty: CartanType,
    pub rank: usize,
    /// `a[i][j] = ⟨α_j, α_i^∨⟩ = 2(α_i, α_j)/(α_i, α_i)`.
    pub a: [[i64; MAX_RANK]; MAX_RANK],
    /// `(α_i, α_i) = 2 d_i`; short roots have `d_i = 1`.
    pub d: [i64; MAX_RANK],
    /// `EXP_DENOM · (ϖ_i, ϖ_j)`.
    form6: [[i64; MAX_RANK]; MAX_RANK],
    /// Minimal positive `N` with `N(Λ, Λ) ⊂ Z`, or the configured override.
    pub n: i64,
    pub order: ConvexOrder,
}

impl CartanDatum {
    pub fn new(ty: CartanType) -> Self {
        let (a, d) = match ty {
            CartanType::A1 => ([[2, 0], [0, 2]], [1, 1]),
            CartanType::A2 => ([[2, -1], [-1, 2]], [1, 1]),
            // α₁ long, α₂ short
            CartanType::B2 => ([[2, -1], [-2, 2]], [2, 1]),
        };
        let rank = ty.rank();
        // (λ, μ) = Σ_j c_j d_j μ_j where λ = Σ_j c_j α_j, c = A⁻¹ λ.
        let det = if rank == 1 { a[0][0] } else { a[0][0] * a[1][1] - a[0][1] * a[1][0] };
        let adj: [[i64; 2]; 2] = if rank == 1 { [[1, 0], [0, 0]] } else { [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]] };
        let mut form6 = [[0i64; 2]; 2];
        for i in 0..rank {
            for j in 0..rank {
                // c = A⁻¹ ϖ_i = adj[·][i] / det, pair with ϖ_j: c_j d_j
                let num = adj[j][i] * d[j] * EXP_DENOM;
                assert_eq!(num % det, 0, "form not representable with EXP_DENOM");
                form6[i][j] = num / det;
            }
        }
        let mut n = 1;
        while !(0..rank).all(|i| (0..rank).all(|j| (form6[i][j] * n) % EXP_DENOM == 0)) {
            n += 1;
        }
        let word = match ty {
            CartanType::A1 => vec![0],
            CartanType::A2 => vec![0, 1, 0],
            CartanType::B2 => vec![0, 1, 0, 1],
        };
        let mut dat = CartanDatum { ty, rank, a, d, form6, n, order: ConvexOrder { word: vec![], roots: vec![] } };
        dat.order = dat.convex_order(&word).expect("default word is reduced");
        dat
    }

    pub fn with_word(ty: CartanType, word: &[usize]) -> Result<Self, Error> {
        let mut d = Self::new(ty);
        d.order = d.convex_order(word)?;
        Ok(d)
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight([self.a[0][i], if self.rank > 1 { self.a[1][i] } else { 0 }])
    }

    pub fn root_to_weight(&self, b: RootVec) -> Weight {
        let mut w = Weight::ZERO;
        for i in 0..self.rank {
            w = w + b.0[i] * self.simple_root(i);
        }
        w
    }

    /// Express a weight in simple-root coordinates if it lies in `Q`.
    pub fn weight_to_root(&self, w: Weight) -> Option<RootVec> {
        if self.rank == 1 {
            return if w.0[0] % 2 == 0 { Some(RootVec([w.0[0] / 2, 0])) } else { None };
        }
        let a = self.a;
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let x = a[1][1] * w.0[0] - a[0][1] * w.0[1];
        let y = -a[1][0] * w.0[0] + a[0][0] * w.0[1];
        if x % det == 0 && y % det == 0 {
            Some(RootVec([x / det, y / det]))
        } else {
            None
        }
    }

    /// `EXP_DENOM · (λ, μ)`.
    pub fn form6(&self, l: Weight, m: Weight) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += l.0[i] * self.form6[i][j] * m.0[j];
            }
        }
        s
    }

    pub fn form(&self, l: Weight, m: Weight) -> BigRational {
        BigRational::new(BigInt::from(self.form6(l, m)), BigInt::from(EXP_DENOM))
    }

    /// The exponent `(λ, μ)` as a power of `q`.
    pub fn qexp(&self, l: Weight, m: Weight) -> QExp {
        QExp(self.form6(l, m))
    }

    pub fn qexp_root(&self, l: Weight, b: RootVec) -> QExp {
        self.qexp(l, self.root_to_weight(b))
    }

    pub fn qexp_roots(&self, a: RootVec, b: RootVec) -> QExp {
        self.qexp(self.root_to_weight(a), self.root_to_weight(b))
    }

    /// `q_i = q^{d_i}` as an exponent.
    pub fn qi(&self, i: usize) -> QExp {
        QExp::int(self.d[i])
    }

    pub fn coroot_pair(&self, l: Weight, i: usize) -> i64 {
        l.0[i]
    }

    pub fn reflect(&self, i: usize, l: Weight) -> Weight {
        l - l.0[i] * self.simple_root(i)
    }

    pub fn reflect_root(&self, i: usize, b: RootVec) -> RootVec {
        let w = self.root_to_weight(b);
        let mut out = b;
        out.0[i] -= w.0[i];
        out
    }

    /// Apply `s_{w[0]} s_{w[1]} ⋯` to `λ` (rightmost reflection first).
    pub fn apply_word(&self, word: &[usize], l: Weight) -> Weight {
        word.iter().rev().fold(l, |acc, &i| self.reflect(i, acc))
    }

    pub fn w0(&self, l: Weight) -> Weight {
        self.apply_word(&self.order.word, l)
    }

    pub fn is_dominant(&self, l: Weight) -> bool {
        (0..self.rank).all(|i| l.0[i] >= 0)
    }

    /// Representative of `λ + 2Λ` in the transversal `{0,1}^rank`.
    pub fn mod2_class(&self, l: Weight) -> Weight {
        let mut c = [0; MAX_RANK];
        for i in 0..self.rank {
            c[i] = l.0[i].rem_euclid(2);
        }
        Weight(c)
    }

    pub fn transversal(&self) -> Vec<Weight> {
        let mut out = Vec::new();
        for a in 0..2 {
            for b in 0..(if self.rank > 1 { 2 } else { 1 }) {
                out.push(Weight([a, b]));
            }
        }
        out
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        Weight::unit(i)
    }

    pub fn rho(&self) -> Weight {
        let mut w = Weight::ZERO;
        for i in 0..self.rank {
            w.0[i] = 1;
        }
        w
    }

    pub fn num_positive_roots(&self) -> usize {
        match self.ty {
            CartanType::A1 => 1,
            CartanType::A2 => 3,
            CartanType::B2 => 4,
        }
    }

    pub fn convex_order(&self, word: &[usize]) -> Result<ConvexOrder, Error> {
        if word.len() != self.num_positive_roots() {
            return Err(Error::Config(format!(
                "reduced word for w0 in {} must have length {}, got {}",
                self.ty,
                self.num_positive_roots(),
                word.len()
            )));
        }
        if word.iter().any(|&i| i >= self.rank) {
            return Err(Error::Config("reduced word uses an index beyond the rank".into()));
        }
        let mut roots = Vec::with_capacity(word.len());
        for t in 0..word.len() {
            let mut b = RootVec::unit(word[t]);
            for &i in word[..t].iter().rev() {
                b = self.reflect_root(i, b);
            }
            if !b.is_nonneg() || roots.contains(&b) {
                return Err(Error::Config(format!("word {:?} is not a reduced word for w0", plus1(word))));
            }
            roots.push(b);
        }
        Ok(ConvexOrder { word: word.to_vec(), roots })
    }

    pub fn positive_roots(&self) -> &[RootVec] {
        &self.order.roots
    }

    /// Number of ways to write `γ` as a sum of positive roots.
    pub fn kostant(&self, g: RootVec) -> u64 {
        fn go(roots: &[RootVec], g: RootVec) -> u64 {
            if g.is_zero() {
                return 1;
            }
            let Some((&b, rest)) = roots.split_first() else { return 0 };
            let mut total = 0;
            let mut r = g;
            while r.is_nonneg() {
                total += go(rest, r);
                r = r - b;
            }
            total
        }
        let mut roots = self.positive_roots().to_vec();
        roots.sort();
        go(&roots, g)
    }

    /// Weyl dimension formula `∏ (λ+ρ, α) / (ρ, α)`.
    pub fn weyl_dim(&self, l: Weight) -> u64 {
        let rho = self.rho();
        let mut num = BigRational::from_integer(1.into());
        for &b in self.positive_roots() {
            let a = self.root_to_weight(b);
            num *= self.form(l + rho, a) / self.form(rho, a);
        }
        assert!(num.is_integer());
        num.to_integer().try_into().expect("dimension fits in u64")
    }

    /// All elements of `Q⁺` of height exactly `h`.
    pub fn grades_of_height(&self, h: i64) -> Vec<RootVec> {
        if self.rank == 1 {
            return vec![RootVec([h, 0])];
        }
        (0..=h).map(|a| RootVec([h - a, a])).collect()
    }

    pub fn fmt_weight(&self, w: Weight) -> String {
        let parts: Vec<String> = w.0[..self.rank].iter().map(|x| x.to_string()).collect();
        parts.join(",")
    }

    pub fn parse_weight(&self, s: &str) -> Result<Weight, Error> {
        let v = crate::expr::parse_int_list(s.trim().trim_start_matches('[').trim_end_matches(']'))
            .map_err(|e| Error::Config(e.to_string()))?;
        if v.len() != self.rank {
            return Err(Error::Config(format!("weight `{s}` must have {} coordinates", self.rank)));
        }
        let mut w = Weight::ZERO;
        w.0[..self.rank].copy_from_slice(&v);
        Ok(w)
    }

    /// Parse `a1+a2`, `2a1`, `1,1` (root coordinates) into `Q`.
    pub fn parse_root(&self, s: &str) -> Result<RootVec, Error> {
        let s = s.trim();
        if s.contains('a') {
            let mut r = RootVec::ZERO;
            for part in s.split('+') {
                let part = part.trim();
                let (c, idx) = part.split_once('a').ok_or_else(|| Error::Config(format!("bad root term `{part}`")))?;
                let c: i64 = if c.is_empty() {
                    1
                } else {
                    c.parse().map_err(|_| Error::Config(format!("bad root term `{part}`")))?
                };
                let i: usize = idx.parse().map_err(|_| Error::Config(format!("bad root term `{part}`")))?;
                if i == 0 || i > self.rank {
                    return Err(Error::Config(format!("simple root index {i} out of range")));
                }
                r.0[i - 1] += c;
            }
            Ok(r)
        } else {
            let v = crate::expr::parse_int_list(s).map_err(|e| Error::Config(e.to_string()))?;
            if v.len() != self.rank {
                return Err(Error::Config(format!("root `{s}` must have {} coordinates", self.rank)));
            }
            let mut r = RootVec::ZERO;
            r.0[..self.rank].copy_from_slice(&v);
            Ok(r)
        }
    }
}

fn plus1(w: &[usize]) -> Vec<usize> {
    w.iter().map(|i| i + 1).collect()
}

/// Datum configuration as read from JSON or TOML.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct DatumConfig {
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub rank: Option<usize>,
    /// 1-based reduced word for `w₀`.
    pub reduced_word: Option<Vec<usize>>,
    #[serde(rename = "N_override")]
    pub n_override: Option<i64>,
}

impl DatumConfig {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let t = text.trim_start();
        if t.starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON config: {e}")))
        } else {
            toml::from_str(text).map_err(|e| Error::Config(format!("invalid TOML config: {e}")))
        }
    }

    pub fn build(&self) -> Result<CartanDatum, Error> {
        let ty: CartanType = self.ty.as_deref().unwrap_or("A1").parse()?;
        if let Some(r) = self.rank {
            if r != ty.rank() {
                return Err(Error::Config(format!("type {ty} has rank {}, config says {r}", ty.rank())));
            }
        }
        let mut d = match &self.reduced_word {
            Some(w) => {
                if w.contains(&0) {
                    return Err(Error::Config("reduced_word indices are 1-based".into()));
                }
                let w: Vec<usize> = w.iter().map(|i| i - 1).collect();
                CartanDatum::with_word(ty, &w)?
            }
            None => CartanDatum::new(ty),
        };
        if let Some(n) = self.n_override {
            if n <= 0 || n % d.n != 0 {
                return Err(Error::Config(format!("N_override must be a positive multiple of {}", d.n)));
            }
            if EXP_DENOM % n != 0 {
                return Err(Error::Config(format!("N_override must divide {EXP_DENOM}")));
            }
            d.n = n;
        }
        Ok(d)
    }
}
