//! The field tower underlying all skew-polynomial arithmetic.
//!
//! L = F_{p^{dm}} is represented in a polynomial basis over F_p. The tower
//! carries a distinguished automorphism σ: a ↦ a^{p^s}, its fixed field
//! K = F_{p^δ} with δ = gcd(s, dm), and the alphabet subfield F = F_{p^d}
//! together with a fixed F-basis of L used by the coordinate maps. Field
//! orders are capped at 2^64 so an element packs into a single u64.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fp::{self, FpMat, FpPoly};

/// Element of L in packed form: the base-p digit vector of its polynomial
/// coordinates, packed little-endian into a u64 (for p = 2 this is the plain
/// bit-packing). Context lives in the [`FieldTower`]; elements of different
/// towers must not be mixed.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fe(u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub(crate) fn raw(self) -> u64 {
        self.0
    }

    #[cfg(test)]
    pub(crate) fn from_raw(v: u64) -> Fe {
        Fe(v)
    }
}

/// An F_p-linear map on L, stored densely; for p = 2 a bit-row mirror is kept
/// so applications cost O(dm) word operations.
#[derive(Clone, Debug)]
struct PLinMap {
    mat: FpMat,
    bits: Option<Vec<u64>>,
}

impl PLinMap {
    fn new(mat: FpMat) -> Self {
        let bits = (mat.p == 2).then(|| {
            (0..mat.rows)
                .map(|r| (0..mat.cols).fold(0u64, |acc, c| acc | (mat.at(r, c) << c)))
                .collect()
        });
        PLinMap { mat, bits }
    }

    fn apply_packed(&self, t: &FieldTower, v: u64) -> u64 {
        if let Some(rows) = &self.bits {
            let mut out = 0u64;
            for (r, &row) in rows.iter().enumerate() {
                out |= (((row & v).count_ones() as u64) & 1) << r;
            }
            out
        } else {
            let digits = t.unpack(v);
            t.pack(&self.mat.mul_vec(&digits))
        }
    }
}

/// Serializable description of a tower; round-trips bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u64,
    pub d: u32,
    pub m: u32,
    pub s: u32,
    pub modulus: Vec<u64>,
}

#[derive(Clone)]
pub struct FieldTower {
    p: u64,
    d: u32,
    m: u32,
    s: u32,
    delta: u32,
    mu: u32,
    dm: u32,
    modulus: FpPoly,
    modulus_bits: u128,
    order_minus_1: u64,
    order_prime_factors: Vec<u64>,
    frob: Vec<PLinMap>,
    f_basis: Vec<Fe>,
    k_basis: Vec<Fe>,
    basis_lf: Vec<Fe>,
    coord_inv: PLinMap,
    fe_bytes: usize,
}

impl FieldTower {
    /// Builds the tower with the default modulus: the lexicographically
    /// smallest monic irreducible of degree dm over F_p (a fixed table-free
    /// choice, identical on every call).
    pub fn new(p: u64, d: u32, m: u32, s: u32) -> Result<FieldTower, Error> {
        Self::check_shape(p, d, m, s)?;
        let f = fp::smallest_irreducible(p, (d * m) as usize);
        Self::with_modulus(p, d, m, s, &f.coeffs)
    }

    /// Builds the tower with an explicit modulus, given as base-p digits in
    /// little-endian degree order (length dm + 1, leading digit nonzero).
    pub fn with_modulus(p: u64, d: u32, m: u32, s: u32, modulus: &[u64]) -> Result<FieldTower, Error> {
        Self::check_shape(p, d, m, s)?;
        let dm = d * m;
        let f = FpPoly::new(modulus.to_vec(), p);
        if f.deg() != Some(dm as usize) || !f.is_irreducible(p) {
            return Err(Error::BadModulus { p, expected: dm as usize });
        }
        let f = f.monic(p);

        let mut order: u128 = 1;
        for _ in 0..dm {
            order *= p as u128;
        }
        let order_minus_1 = (order - 1) as u64;
        let modulus_bits = f
            .coeffs
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &c)| acc | ((c as u128 & 1) << i));

        let delta = fp::gcd_u64(s as u64, dm as u64) as u32;
        let mut t = FieldTower {
            p,
            d,
            m,
            s,
            delta,
            mu: dm / delta,
            dm,
            modulus: f,
            modulus_bits,
            order_minus_1,
            order_prime_factors: fp::factor_u64(order_minus_1).into_iter().map(|(q, _)| q).collect(),
            frob: Vec::new(),
            f_basis: Vec::new(),
            k_basis: Vec::new(),
            basis_lf: Vec::new(),
            coord_inv: PLinMap::new(FpMat::identity(1, p)),
            fe_bytes: ((64 - order_minus_1.leading_zeros() as usize) + 7) / 8,
        };
        t.build_frobenius_tables();
        t.f_basis = t.fixed_subspace_basis(d % dm);
        debug_assert_eq!(t.f_basis.len(), d as usize);
        t.k_basis = t.fixed_subspace_basis(s % dm);
        debug_assert_eq!(t.k_basis.len(), delta as usize);
        let default_basis: Vec<Fe> = {
            let mut b = Vec::with_capacity(m as usize);
            let mut pw = Fe::ONE;
            for _ in 0..m {
                b.push(pw);
                pw = t.mul(pw, t.z());
            }
            b
        };
        t.install_basis_lf(default_basis)?;
        Ok(t)
    }

    /// Replaces the F-basis of L used by the coordinate maps. Errors unless
    /// the m elements are linearly independent over F.
    pub fn with_basis_lf(mut self, basis: Vec<Fe>) -> Result<FieldTower, Error> {
        if basis.len() != self.m as usize {
            return Err(Error::LengthMismatch { expected: self.m as usize, got: basis.len() });
        }
        self.install_basis_lf(basis)?;
        Ok(self)
    }

    fn check_shape(p: u64, d: u32, m: u32, s: u32) -> Result<(), Error> {
        if !fp::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 || m == 0 {
            return Err(Error::param("d and m must be positive"));
        }
        let dm = d as u64 * m as u64;
        if dm > 64 {
            return Err(Error::param(format!("extension degree d*m = {dm} exceeds 64")));
        }
        let mut order: u128 = 1;
        for _ in 0..dm {
            order *= p as u128;
            if order > 1u128 << 64 {
                return Err(Error::param(format!("field order p^(d*m) = {p}^{dm} exceeds 2^64")));
            }
        }
        if s == 0 || s as u64 > dm {
            return Err(Error::param(format!("s must satisfy 1 <= s <= d*m, got {s}")));
        }
        Ok(())
    }

    fn build_frobenius_tables(&mut self) {
        let dm = self.dm as usize;
        let p = self.p;
        // Matrix of τ: column i holds the digits of (z^i)^p = (z^p)^i.
        let zp = self.pow(self.z(), p);
        let mut tau = FpMat::zero(dm, dm, p);
        let mut pw = Fe::ONE;
        for i in 0..dm {
            for (r, &dg) in self.unpack(pw.0).iter().enumerate() {
                tau.set(r, i, dg);
            }
            pw = self.mul(pw, zp);
        }
        let mut mats = Vec::with_capacity(dm);
        mats.push(FpMat::identity(dm, p));
        for e in 1..dm {
            let prev = &mats[e - 1];
            let mut next = FpMat::zero(dm, dm, p);
            for r in 0..dm {
                for c in 0..dm {
                    let mut acc = 0u64;
                    for k in 0..dm {
                        acc = fp::add_mod(acc, fp::mul_mod(tau.at(r, k), prev.at(k, c), p), p);
                    }
                    next.set(r, c, acc);
                }
            }
            mats.push(next);
        }
        self.frob = mats.into_iter().map(PLinMap::new).collect();
    }

    /// F_p-basis of the subfield fixed by τ^e (e reduced mod dm).
    fn fixed_subspace_basis(&self, e: u32) -> Vec<Fe> {
        let dm = self.dm as usize;
        let p = self.p;
        let mut diff = self.frob[e as usize].mat.clone();
        for i in 0..dm {
            let v = fp::sub_mod(diff.at(i, i), 1, p);
            diff.set(i, i, v);
        }
        diff.kernel_basis().into_iter().map(|v| Fe(self.pack(&v))).collect()
    }

    fn install_basis_lf(&mut self, basis: Vec<Fe>) -> Result<(), Error> {
        let dm = self.dm as usize;
        let (d, m) = (self.d as usize, self.m as usize);
        let mut expand = FpMat::zero(dm, dm, self.p);
        for i in 0..m {
            for j in 0..d {
                let prod = self.mul(self.f_basis[j], basis[i]);
                for (r, &dg) in self.unpack(prod.0).iter().enumerate() {
                    expand.set(r, i * d + j, dg);
                }
            }
        }
        let inv = expand
            .inverse()
            .ok_or_else(|| Error::param("basis_lf is not an F-basis of L"))?;
        self.coord_inv = PLinMap::new(inv);
        self.basis_lf = basis;
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn delta(&self) -> u32 {
        self.delta
    }
    pub fn mu(&self) -> u32 {
        self.mu
    }
    pub fn ext_degree(&self) -> u32 {
        self.dm
    }
    /// |L| - 1.
    pub fn order_minus_1(&self) -> u64 {
        self.order_minus_1
    }
    /// |K| = p^δ, the size of the fixed field of σ.
    pub fn order_of_k(&self) -> u64 {
        self.p.pow(self.delta)
    }
    pub fn modulus_digits(&self) -> &[u64] {
        &self.modulus.coeffs
    }
    pub fn basis_lf(&self) -> &[Fe] {
        &self.basis_lf
    }
    /// F_p-basis of the alphabet subfield F.
    pub fn f_basis(&self) -> &[Fe] {
        &self.f_basis
    }
    /// F_p-basis of K, the fixed field of σ.
    pub fn k_basis(&self) -> &[Fe] {
        &self.k_basis
    }

    pub fn spec(&self) -> TowerSpec {
        TowerSpec {
            p: self.p,
            d: self.d,
            m: self.m,
            s: self.s,
            modulus: self.modulus.coeffs.clone(),
        }
    }

    pub fn from_spec(spec: &TowerSpec) -> Result<FieldTower, Error> {
        Self::with_modulus(spec.p, spec.d, spec.m, spec.s, &spec.modulus)
    }

    /// The residue class of the modulus variable; generates L over F_p.
    pub fn z(&self) -> Fe {
        if self.dm == 1 {
            // deg-1 modulus z + c: the class of z is -c
            Fe(fp::sub_mod(0, self.modulus.coeffs[0], self.p))
        } else {
            Fe(self.p)
        }
    }

    pub fn scalar(&self, c: u64) -> Fe {
        Fe(c % self.p)
    }

    pub(crate) fn unpack(&self, v: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.dm as usize];
        if self.p == 2 {
            for (i, o) in out.iter_mut().enumerate() {
                *o = (v >> i) & 1;
            }
        } else {
            let mut v = v;
            for o in out.iter_mut() {
                *o = v % self.p;
                v /= self.p;
            }
        }
        out
    }

    pub(crate) fn pack(&self, digits: &[u64]) -> u64 {
        if self.p == 2 {
            digits.iter().enumerate().fold(0u64, |acc, (i, &d)| acc | ((d & 1) << i))
        } else {
            let mut v: u128 = 0;
            for &d in digits.iter().rev() {
                v = v * self.p as u128 + (d % self.p) as u128;
            }
            v as u64
        }
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (da, db) = (self.unpack(a.0), self.unpack(b.0));
        let sum: Vec<u64> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| fp::add_mod(x, y, self.p))
            .collect();
        Fe(self.pack(&sum))
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let digits: Vec<u64> = self.unpack(a.0).iter().map(|&x| fp::sub_mod(0, x, self.p)).collect();
        Fe(self.pack(&digits))
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            let mut acc: u128 = 0;
            let mut x = a.0;
            let y = b.0 as u128;
            while x != 0 {
                acc ^= y << x.trailing_zeros();
                x &= x - 1;
            }
            return Fe(self.reduce2(acc));
        }
        let dm = self.dm as usize;
        let (da, db) = (self.unpack(a.0), self.unpack(b.0));
        let mut prod = vec![0u128; 2 * dm - 1];
        for i in 0..dm {
            if da[i] == 0 {
                continue;
            }
            for j in 0..dm {
                prod[i + j] += da[i] as u128 * db[j] as u128;
            }
        }
        let p = self.p as u128;
        for k in (dm..2 * dm - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for (j, &mc) in self.modulus.coeffs[..dm].iter().enumerate() {
                // x^dm = -(low part of modulus); add c * (p - mc)
                prod[k - dm + j] += c * (p - mc as u128) % p;
            }
        }
        let digits: Vec<u64> = prod[..dm].iter().map(|&x| (x % p) as u64).collect();
        Fe(self.pack(&digits))
    }

    fn reduce2(&self, mut acc: u128) -> u64 {
        let dm = self.dm;
        while acc >> dm != 0 {
            let deg = 127 - acc.leading_zeros();
            acc ^= self.modulus_bits << (deg - dm);
        }
        acc as u64
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero (callers validate).
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        self.pow(a, self.order_minus_1 - 1)
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    /// τ^e for 0 <= e < dm, the building block of σ powers.
    fn apply_frob(&self, e: usize, a: Fe) -> Fe {
        if e == 0 {
            return a;
        }
        Fe(self.frob[e].apply_packed(self, a.0))
    }

    pub fn sigma(&self, a: Fe) -> Fe {
        self.sigma_pow(a, 1)
    }

    /// σ^i for any integer i (σ has order μ).
    pub fn sigma_pow(&self, a: Fe, i: i64) -> Fe {
        let j = i.rem_euclid(self.mu as i64) as u64;
        let e = (self.s as u64 * j) % self.dm as u64;
        self.apply_frob(e as usize, a)
    }

    /// Truncated norm: i >= 0 gives a·σ(a)···σ^{i-1}(a), i < 0 gives
    /// a·σ^{-1}(a)···σ^{i+1}(a); N_0 = 1.
    pub fn partial_norm(&self, a: Fe, i: i64) -> Fe {
        let step: i64 = if i >= 0 { 1 } else { -1 };
        let mut acc = Fe::ONE;
        let mut j: i64 = 0;
        for _ in 0..i.unsigned_abs() {
            acc = self.mul(acc, self.sigma_pow(a, j));
            j += step;
        }
        acc
    }

    /// The full norm N_μ(a), always an element of K.
    pub fn norm(&self, a: Fe) -> Fe {
        self.partial_norm(a, self.mu as i64)
    }

    /// Coordinates of a in the fixed F-basis of L: the unique (v_0..v_{m-1})
    /// in F^m with a = Σ v_i basis_lf[i].
    pub fn coordinates(&self, a: Fe) -> Vec<Fe> {
        let x = self.coord_inv.apply_packed(self, a.0);
        let digits = self.unpack(x);
        let (d, m) = (self.d as usize, self.m as usize);
        (0..m)
            .map(|i| {
                let mut v = Fe::ZERO;
                for j in 0..d {
                    let c = digits[i * d + j];
                    if c != 0 {
                        v = self.add(v, self.mul(Fe(c), self.f_basis[j]));
                    }
                }
                v
            })
            .collect()
    }

    pub fn from_coordinates(&self, v: &[Fe]) -> Result<Fe, Error> {
        if v.len() != self.m as usize {
            return Err(Error::LengthMismatch { expected: self.m as usize, got: v.len() });
        }
        let mut acc = Fe::ZERO;
        for (vi, bi) in v.iter().zip(&self.basis_lf) {
            acc = self.add(acc, self.mul(*vi, *bi));
        }
        Ok(acc)
    }

    /// Membership in the alphabet subfield F = F_{p^d}.
    pub fn in_subfield_f(&self, a: Fe) -> bool {
        self.apply_frob((self.d % self.dm) as usize, a) == a
    }

    /// Membership in K, the fixed field of σ.
    pub fn in_subfield_k(&self, a: Fe) -> bool {
        self.sigma(a) == a
    }

    /// Normality test: {a, σ(a), ..., σ^{μ-1}(a)} is a K-basis of L iff
    /// gcd(z^μ - 1, a z^{μ-1} + σ(a) z^{μ-2} + ... + σ^{μ-1}(a)) = 1 in L[z].
    pub fn is_normal(&self, a: Fe) -> bool {
        if a.is_zero() {
            return false;
        }
        let mu = self.mu as usize;
        let mut lhs = vec![Fe::ZERO; mu + 1];
        lhs[0] = self.neg(Fe::ONE);
        lhs[mu] = Fe::ONE;
        let mut rhs = vec![Fe::ZERO; mu];
        for j in 0..mu {
            rhs[mu - 1 - j] = self.sigma_pow(a, j as i64);
        }
        lpoly_gcd_is_unit(self, lhs, rhs)
    }

    /// Primitivity test via the factorization of |L*| (precomputed at build).
    pub fn is_primitive(&self, a: Fe) -> Result<bool, Error> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        for &q in &self.order_prime_factors {
            if self.pow(a, self.order_minus_1 / q) == Fe::ONE {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..=self.order_minus_1))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        loop {
            let a = self.random_element(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Uniform element of F.
    pub fn random_f<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let mut acc = Fe::ZERO;
        for &b in &self.f_basis {
            let c = rng.gen_range(0..self.p);
            if c != 0 {
                acc = self.add(acc, self.mul(Fe(c), b));
            }
        }
        acc
    }

    pub fn random_f_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        loop {
            let a = self.random_f(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Uniform element of K.
    pub fn random_k<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let mut acc = Fe::ZERO;
        for &b in &self.k_basis {
            let c = rng.gen_range(0..self.p);
            if c != 0 {
                acc = self.add(acc, self.mul(Fe(c), b));
            }
        }
        acc
    }

    /// Rejection-samples a normal element; the density of normal elements
    /// makes the expected number of draws small.
    pub fn random_normal<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        loop {
            let a = self.random_nonzero(rng);
            if self.is_normal(a) {
                return a;
            }
        }
    }

    pub fn random_primitive<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        loop {
            let a = self.random_nonzero(rng);
            if self.is_primitive(a).unwrap_or(false) {
                return a;
            }
        }
    }

    /// All p^δ elements of K, in a fixed order.
    pub fn k_elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let count = self.p.pow(self.delta);
        (0..count).map(move |idx| {
            let mut acc = Fe::ZERO;
            let mut v = idx;
            for &b in &self.k_basis {
                let c = v % self.p;
                v /= self.p;
                if c != 0 {
                    acc = self.add(acc, self.mul(Fe(c), b));
                }
            }
            acc
        })
    }

    /// All of L; desk-scale towers only.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..=self.order_minus_1).map(Fe)
    }

    /// Serialized width of one element in bytes.
    pub fn fe_bytes(&self) -> usize {
        self.fe_bytes
    }

    /// Lowercase hex of the little-endian packing, fixed width.
    pub fn fe_to_hex(&self, a: Fe) -> String {
        a.0.to_le_bytes()[..self.fe_bytes]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn fe_from_hex(&self, s: &str) -> Result<Fe, Error> {
        if s.len() != 2 * self.fe_bytes || !s.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Format(format!(
                "expected {} lowercase hex chars, got {s:?}",
                2 * self.fe_bytes
            )));
        }
        let mut bytes = [0u8; 8];
        for (i, chunk) in s.as_bytes().chunks(2).enumerate() {
            bytes[i] = u8::from_str_radix(std::str::from_utf8(chunk).unwrap(), 16)
                .map_err(|e| Error::Format(e.to_string()))?;
        }
        let v = u64::from_le_bytes(bytes);
        if v > self.order_minus_1 {
            return Err(Error::Format(format!("element value {v:#x} out of range")));
        }
        Ok(Fe(v))
    }
}

/// Monic gcd over the (commutative) polynomial ring L[z]; returns true when
/// the gcd is a unit.
fn lpoly_gcd_is_unit(t: &FieldTower, a: Vec<Fe>, b: Vec<Fe>) -> bool {
    fn trim(v: &mut Vec<Fe>) {
        while v.last() == Some(&Fe::ZERO) {
            v.pop();
        }
    }
    fn rem(t: &FieldTower, mut num: Vec<Fe>, den: &[Fe]) -> Vec<Fe> {
        let lead_inv = t.inv(*den.last().unwrap());
        while num.len() >= den.len() {
            let c = t.mul(*num.last().unwrap(), lead_inv);
            let shift = num.len() - den.len();
            if !c.is_zero() {
                for (i, &dc) in den.iter().enumerate() {
                    num[shift + i] = t.sub(num[shift + i], t.mul(c, dc));
                }
            }
            num.pop();
            trim(&mut num);
        }
        num
    }
    let (mut a, mut b) = (a, b);
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(t, a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}
