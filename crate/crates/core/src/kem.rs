//! Key encapsulation on top of the codes: parameter search, key schedule,
//! Niederreiter-style encapsulation with a hashed shared secret, and the
//! generator-matrix (McEliece) variant.
//!
//! The public key is the reduced row echelon form of the private parity
//! check matrix stacked over random rows; the extra rows cut the code to a
//! fixed dimension k and hide the algebraic structure. Decapsulation builds
//! one preimage of the cryptogram, strips the codeword part with the
//! decoder, and hashes the recovered error.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::decoder::{decode, ErrorVector};
use crate::error::Error;
use crate::goppa::{make_goppa_poly, GoppaCode};
use crate::linalg::Matrix;
use crate::ore::OreRing;
use crate::pindep::{maximal_p_independent, PointSet};
use crate::tower::{Fe, FieldTower, TowerSpec};

/// Bound on resampling loops in key generation.
const KEYGEN_RETRIES: u32 = 64;

pub const PUBLIC_KEY_SPEC_VERSION: u32 = 1;
pub const CRYPTOGRAM_SPEC_VERSION: u32 = 1;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// p^e, saturating. Only compared against other u128 products, and the
/// comparisons stay correct under saturation.
fn pow_sat(p: u128, e: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(p);
    }
    acc
}

/// n·δ ≤ m·d·(p^δ − 1). This single inequality carries double duty: it is
/// the lower window bound on m, and (since μ = dm/δ) it is also the demand
/// that the maximal evaluation set μ(p^δ − 1) covers the length n.
fn alphabet_covers(n: usize, t_p: u64, d: u32, m: u32, delta: u32) -> bool {
    let lhs = (n as u128) * (delta as u128);
    let rhs = (m as u128)
        .saturating_mul(d as u128)
        .saturating_mul(pow_sat(t_p as u128, delta) - 1);
    lhs <= rhs
}

/// Cryptosystem parameters: code length n, correction capability t, the
/// alphabet F = F_{p^d}, the extension degree m and automorphism exponent s
/// (so L = F_{p^dm}, σ = τ^s, δ = gcd(s, dm), μ = dm/δ).
///
/// Admissibility demands 10tm ≥ n and 4tm ≤ n, a nontrivial automorphism
/// (μ ≥ 2), and nδ ≤ dm(p^δ − 1) so that a length-n evaluation set exists.
/// The dimension of the public code is fixed at k = n − 2t·⌊n/(4t)⌋.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    n: usize,
    t: usize,
    p: u64,
    d: u32,
    m: u32,
    s: u32,
}

impl Params {
    pub fn new(n: usize, t: usize, p: u64, d: u32, m: u32, s: u32) -> Result<Params, Error> {
        if t == 0 || 2 * t >= n {
            return Err(Error::param("need 0 < t < n/2"));
        }
        if p < 2 || d == 0 || m == 0 {
            return Err(Error::param("field parameters must be positive (and p at least 2)"));
        }
        let dm = d as u64 * m as u64;
        if s == 0 || s as u64 > dm {
            return Err(Error::param("automorphism exponent must lie in 1..=dm"));
        }
        let tm = t * m as usize;
        if 10 * tm < n || 4 * tm > n {
            return Err(Error::param("m outside the window n/(10t) <= m <= n/(4t)"));
        }
        let delta = gcd(s as u64, dm) as u32;
        if dm / (delta as u64) < 2 {
            return Err(Error::param("automorphism must act nontrivially (mu >= 2)"));
        }
        if !alphabet_covers(n, p, d, m, delta) {
            return Err(Error::param(
                "alphabet too small: n*delta exceeds d*m*(p^delta - 1)",
            ));
        }
        Ok(Params { n, t, p, d, m, s })
    }

    /// Pick s uniformly among the exponents realizing the given δ.
    pub fn from_pair<R: Rng + ?Sized>(
        n: usize,
        t: usize,
        p: u64,
        d: u32,
        m: u32,
        delta: u32,
        rng: &mut R,
    ) -> Result<Params, Error> {
        let dm = d as u64 * m as u64;
        let candidates: Vec<u32> = (1..=dm)
            .filter(|&s| gcd(s, dm) == delta as u64)
            .map(|s| s as u32)
            .collect();
        if candidates.is_empty() {
            return Err(Error::param("delta does not divide dm"));
        }
        let s = candidates[rng.gen_range(0..candidates.len())];
        Params::new(n, t, p, d, m, s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
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
        gcd(self.s as u64, self.d as u64 * self.m as u64) as u32
    }

    pub fn mu(&self) -> u32 {
        (self.d as u64 * self.m as u64 / self.delta() as u64) as u32
    }

    /// Dimension of the public code: k = n − 2t·⌊n/(4t)⌋.
    pub fn k(&self) -> usize {
        self.n - 2 * self.t * (self.n / (4 * self.t))
    }

    /// The tower this parameter set lives on (default modulus).
    pub fn tower(&self) -> Result<FieldTower, Error> {
        FieldTower::new(self.p, self.d, self.m, self.s)
    }
}

/// All admissible (m, δ) pairs for a given length, capability and alphabet,
/// sorted by (m, δ). δ ranges over the divisors of dm with μ = dm/δ ≥ 2;
/// pairs must satisfy the window 10tm ≥ n ≥ 4tm and the covering bound
/// nδ ≤ dm(p^δ − 1).
pub fn search_parameters(n: usize, t: usize, p: u64, d: u32) -> Result<Vec<(u32, u32)>, Error> {
    if t == 0 || 2 * t >= n {
        return Err(Error::param("need 0 < t < n/2"));
    }
    if p < 2 || d == 0 {
        return Err(Error::param("field parameters must be positive (and p at least 2)"));
    }
    let m_lo = ((n + 10 * t - 1) / (10 * t)).max(1);
    let m_hi = n / (4 * t);
    let mut out = Vec::new();
    for m in m_lo..=m_hi {
        let m = m as u32;
        let dm = d * m;
        for delta in 1..=dm / 2 {
            if dm % delta == 0 && alphabet_covers(n, p, d, m, delta) {
                out.push((m, delta));
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoAdmissibleParameters);
    }
    Ok(out)
}

/// Public key: the (n−k)×n reduced row echelon matrix over F whose row
/// space contains the private parity check rows.
#[derive(Clone)]
pub struct PublicKey {
    params: Params,
    tower: Arc<FieldTower>,
    h_pub: Matrix,
}

impl PublicKey {
    /// Validating constructor: the tower must realize the parameters and
    /// the matrix must be a canonical (n−k)×n RREF over the alphabet F.
    pub fn new(params: Params, tower: Arc<FieldTower>, h_pub: Matrix) -> Result<PublicKey, Error> {
        if tower.p() != params.p
            || tower.d() != params.d
            || tower.m() != params.m
            || tower.s() != params.s
        {
            return Err(Error::param("tower does not realize the parameter set"));
        }
        let rows = params.n - params.k();
        if h_pub.rows() != rows || h_pub.cols() != params.n {
            return Err(Error::param("public matrix has the wrong shape"));
        }
        if !h_pub.is_canonical_rref() {
            return Err(Error::param("public matrix is not in reduced row echelon form"));
        }
        for i in 0..h_pub.rows() {
            if h_pub.row(i).iter().any(|&v| !tower.in_subfield_f(v)) {
                return Err(Error::param("public matrix entries must lie in the alphabet"));
            }
        }
        Ok(PublicKey { params, tower, h_pub })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn matrix(&self) -> &Matrix {
        &self.h_pub
    }

    /// Pivot columns, one per row. Well defined because the matrix is kept
    /// in canonical RREF.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.h_pub.rows())
            .map(|i| self.h_pub.row(i).iter().position(|c| !c.is_zero()).unwrap())
            .collect()
    }

    pub fn to_spec(&self) -> PublicKeySpec {
        PublicKeySpec {
            version: PUBLIC_KEY_SPEC_VERSION,
            tower: self.tower.spec(),
            n: self.params.n,
            t: self.params.t,
            rows: self.h_pub.rows(),
            cols: self.h_pub.cols(),
            data: (0..self.h_pub.rows())
                .flat_map(|i| self.h_pub.row(i).iter().map(|&v| self.tower.fe_to_hex(v)))
                .collect(),
        }
    }

    pub fn from_spec(spec: &PublicKeySpec) -> Result<PublicKey, Error> {
        if spec.version != PUBLIC_KEY_SPEC_VERSION {
            return Err(Error::Format(format!(
                "unsupported public key version {}",
                spec.version
            )));
        }
        let tower = Arc::new(FieldTower::from_spec(&spec.tower)?);
        let params =
            Params::new(spec.n, spec.t, spec.tower.p, spec.tower.d, spec.tower.m, spec.tower.s)?;
        if spec.data.len() != spec.rows * spec.cols {
            return Err(Error::Format("matrix data does not match the declared shape".into()));
        }
        let mut h_pub = Matrix::zero(spec.rows, spec.cols);
        for i in 0..spec.rows {
            for j in 0..spec.cols {
                h_pub.set(i, j, tower.fe_from_hex(&spec.data[i * spec.cols + j])?);
            }
        }
        PublicKey::new(params, tower, h_pub)
    }
}

/// Serialized public key: versioned, dimensions plus row-major hex entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PublicKeySpec {
    pub version: u32,
    pub tower: TowerSpec,
    pub n: usize,
    pub t: usize,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<String>,
}

/// Syndrome of the hidden error against the public matrix, length n−k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cryptogram {
    values: Vec<Fe>,
}

impl Cryptogram {
    pub fn values(&self) -> &[Fe] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_spec(&self, tower: &FieldTower) -> CryptogramSpec {
        CryptogramSpec {
            version: CRYPTOGRAM_SPEC_VERSION,
            values: self.values.iter().map(|&v| tower.fe_to_hex(v)).collect(),
        }
    }

    pub fn from_spec(tower: &FieldTower, spec: &CryptogramSpec) -> Result<Cryptogram, Error> {
        if spec.version != CRYPTOGRAM_SPEC_VERSION {
            return Err(Error::Format(format!(
                "unsupported cryptogram version {}",
                spec.version
            )));
        }
        let values = spec
            .values
            .iter()
            .map(|h| tower.fe_from_hex(h))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cryptogram { values })
    }
}

/// Serialized cryptogram: versioned hex vector.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CryptogramSpec {
    pub version: u32,
    pub values: Vec<String>,
}

/// 32-byte shared secret.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SharedSecret([u8; 32]);

impl SharedSecret {
    pub fn bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Canonical serialization hashed into the shared secret: the length as a
/// little-endian u64, then each coordinate's base-p packing in fixed width.
pub(crate) fn error_bytes(tower: &FieldTower, e: &ErrorVector) -> Vec<u8> {
    let w = tower.fe_bytes();
    let mut out = Vec::with_capacity(8 + w * e.len());
    out.extend_from_slice(&(e.len() as u64).to_le_bytes());
    for &v in e.values() {
        out.extend_from_slice(&v.raw().to_le_bytes()[..w]);
    }
    out
}

#[cfg(test)]
pub(crate) fn error_from_bytes(tower: &FieldTower, bytes: &[u8]) -> Result<ErrorVector, Error> {
    if bytes.len() < 8 {
        return Err(Error::Format("serialized error shorter than its header".into()));
    }
    let n = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
    let w = tower.fe_bytes();
    let expect = n.checked_mul(w).and_then(|b| b.checked_add(8));
    if expect != Some(bytes.len()) {
        return Err(Error::Format("serialized error has the wrong length".into()));
    }
    let mut values = Vec::with_capacity(n);
    for chunk in bytes[8..].chunks(w) {
        let mut b = [0u8; 8];
        b[..w].copy_from_slice(chunk);
        let v = u64::from_le_bytes(b);
        if v > tower.order_minus_1() {
            return Err(Error::Format("serialized coordinate out of range".into()));
        }
        values.push(Fe::from_raw(v));
    }
    Ok(ErrorVector::new(values))
}

/// SHAKE-256 digest (32 bytes) of the canonical error serialization.
pub fn hash_error(tower: &FieldTower, e: &ErrorVector) -> SharedSecret {
    let mut h = Shake256::default();
    h.update(&error_bytes(tower, e));
    let mut out = [0u8; 32];
    h.finalize_xof().read(&mut out);
    SharedSecret(out)
}

/// Nonzero rows of the RREF of the private parity check matrix stacked
/// over the augmentation rows a. Fails unless the result has exactly n−k
/// rows, i.e. unless a completes the rank.
pub fn assemble_public_matrix(code: &GoppaCode, k: usize, a: &Matrix) -> Result<Matrix, Error> {
    let tw = code.tower();
    let h = code.parity_check_matrix();
    let stacked = if a.rows() == 0 { h } else { h.vstack(a)? };
    let (basis, _) = stacked.row_space_basis(tw);
    if basis.rows() != code.n() - k {
        return Err(Error::param("augmentation rows do not complete the public rank"));
    }
    Ok(basis)
}

fn random_f_matrix<R: Rng + ?Sized>(
    tw: &FieldTower,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix {
    let mut m = Matrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, tw.random_f(rng));
        }
    }
    m
}

fn random_full_rank<R: Rng + ?Sized>(
    tw: &FieldTower,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<Matrix, Error> {
    if rows == 0 {
        return Ok(Matrix::zero(0, cols));
    }
    for _ in 0..KEYGEN_RETRIES {
        let m = random_f_matrix(tw, rows, cols, rng);
        if m.rank(tw) == rows {
            return Ok(m);
        }
    }
    Err(Error::KeygenRetriesExceeded(KEYGEN_RETRIES))
}

/// Sample a keypair: a code on a random maximal evaluation set with unit
/// twists, and the public RREF matrix of its parity rows stacked over
/// random full-rank augmentation rows.
///
/// When rank(H) < n−k the augmentation cuts the public code to a random
/// subcode of dimension k. The cut is harmless for decoding: the public
/// code is contained in the private one, so every decodable word stays
/// decodable.
pub fn keygen<R: Rng + ?Sized>(
    params: &Params,
    rng: &mut R,
) -> Result<(PublicKey, GoppaCode), Error> {
    let tower = Arc::new(params.tower()?);
    let ring = OreRing::twisted(Arc::clone(&tower));
    let alpha = tower.random_normal(rng);
    let gamma = tower.random_primitive(rng);
    let mut pool = maximal_p_independent(&ring, alpha, gamma)?;
    debug_assert!(pool.len() >= params.n);
    pool.shuffle(rng);
    pool.truncate(params.n);
    let points = PointSet::new(&ring, pool)?;
    let g = make_goppa_poly(params.t, &ring, rng)?;
    let code = GoppaCode::with_unit_etas(ring, points, g)?;

    let k = params.k();
    let r_h = code.parity_check_matrix().rank(&tower);
    let extra = (params.n - k)
        .checked_sub(r_h)
        .ok_or_else(|| Error::param("parity rank exceeds the public row count"))?;
    for _ in 0..KEYGEN_RETRIES {
        let a = random_full_rank(&tower, extra, params.n, rng)?;
        if let Ok(h_pub) = assemble_public_matrix(&code, k, &a) {
            let pk = PublicKey::new(*params, Arc::clone(&tower), h_pub)?;
            return Ok((pk, code));
        }
    }
    Err(Error::KeygenRetriesExceeded(KEYGEN_RETRIES))
}

/// Uniform error of weight exactly t: a partial Fisher-Yates pass picks the
/// support, the values are uniform nonzero alphabet elements.
pub(crate) fn random_error<R: Rng + ?Sized>(
    tw: &FieldTower,
    n: usize,
    t_param: usize,
    rng: &mut R,
) -> ErrorVector {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..t_param {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    let mut values = vec![Fe::ZERO; n];
    for &pos in &idx[..t_param] {
        values[pos] = tw.random_f_nonzero(rng);
    }
    ErrorVector::new(values)
}

/// Deterministic half of encapsulation: cryptogram and secret for a
/// caller-chosen error of weight exactly t. Exposed for known-answer tests
/// and exhaustive sweeps.
pub fn encapsulate_error(
    pk: &PublicKey,
    e: &ErrorVector,
) -> Result<(Cryptogram, SharedSecret), Error> {
    let tw = pk.tower();
    if e.len() != pk.params.n {
        return Err(Error::LengthMismatch { expected: pk.params.n, got: e.len() });
    }
    if e.weight() != pk.params.t {
        return Err(Error::param("error weight must equal t"));
    }
    if e.values().iter().any(|&v| !tw.in_subfield_f(v)) {
        return Err(Error::param("error values must lie in the alphabet"));
    }
    let values = pk.h_pub.mul_vec(tw, e.values())?;
    Ok((Cryptogram { values }, hash_error(tw, e)))
}

/// Encapsulate: sample a weight-t error, publish its public syndrome, keep
/// the hash of the error as the shared secret.
pub fn encap<R: Rng + ?Sized>(
    pk: &PublicKey,
    rng: &mut R,
) -> Result<(Cryptogram, SharedSecret), Error> {
    let e = random_error(pk.tower(), pk.params.n, pk.params.t, rng);
    encapsulate_error(pk, &e)
}

/// Decapsulate: place the cryptogram on the pivot columns (any preimage
/// works, and this one is deterministic), decode away the codeword part,
/// and hash the recovered error. A cryptogram without a weight-t
/// explanation that reproduces it is rejected as invalid.
pub fn decap(sk: &GoppaCode, pk: &PublicKey, c: &Cryptogram) -> Result<SharedSecret, Error> {
    let tw = pk.tower();
    if sk.n() != pk.params.n || sk.t() != pk.params.t || sk.tower().spec() != tw.spec() {
        return Err(Error::param("secret key does not match the public key"));
    }
    let rows = pk.h_pub.rows();
    if c.values.len() != rows {
        return Err(Error::LengthMismatch { expected: rows, got: c.values.len() });
    }
    if c.values.iter().any(|&v| !tw.in_subfield_f(v)) {
        return Err(Error::InvalidCryptogram("entries outside the alphabet".into()));
    }
    let mut y = vec![Fe::ZERO; pk.params.n];
    for (row, &col) in pk.pivots().iter().enumerate() {
        y[col] = c.values[row];
    }
    let e = match decode(sk, &y) {
        Ok(e) => e,
        Err(Error::Undecodable(_)) => {
            return Err(Error::InvalidCryptogram("no weight-t explanation".into()));
        }
        Err(err) => return Err(err),
    };
    let back = pk.h_pub.mul_vec(tw, e.values())?;
    if back != c.values {
        return Err(Error::InvalidCryptogram(
            "recovered error does not reproduce the cryptogram".into(),
        ));
    }
    Ok(hash_error(tw, &e))
}

/// Generator-matrix public key for the McEliece-style variant.
#[derive(Clone)]
pub struct McEliecePublicKey {
    params: Params,
    tower: Arc<FieldTower>,
    g_pub: Matrix,
}

impl McEliecePublicKey {
    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g_pub
    }
}

/// Sample a generator-matrix keypair: G spans the private code, S is a
/// random nonsingular mixer, and the public generator is the first k rows
/// of S·G (a random k-dimensional subcode).
pub fn mceliece_keygen<R: Rng + ?Sized>(
    params: &Params,
    rng: &mut R,
) -> Result<(McEliecePublicKey, GoppaCode), Error> {
    let tower = Arc::new(params.tower()?);
    let ring = OreRing::twisted(Arc::clone(&tower));
    let alpha = tower.random_normal(rng);
    let gamma = tower.random_primitive(rng);
    let mut pool = maximal_p_independent(&ring, alpha, gamma)?;
    pool.shuffle(rng);
    pool.truncate(params.n);
    let points = PointSet::new(&ring, pool)?;
    let g = make_goppa_poly(params.t, &ring, rng)?;
    let code = GoppaCode::with_unit_etas(ring, points, g)?;

    let gen = Matrix::from_rows(code.parity_check_matrix().kernel_basis(&tower))?;
    let k = params.k();
    if gen.rows() < k {
        return Err(Error::param("private code dimension fell below k"));
    }
    let mixer = random_nonsingular(&tower, gen.rows(), rng)?;
    let mixed = mixer.mul(&tower, &gen)?;
    let g_pub = Matrix::from_rows((0..k).map(|i| mixed.row(i).to_vec()).collect())?;
    debug_assert_eq!(g_pub.rank(&tower), k);
    Ok((McEliecePublicKey { params: *params, tower, g_pub }, code))
}

fn random_nonsingular<R: Rng + ?Sized>(
    tw: &FieldTower,
    size: usize,
    rng: &mut R,
) -> Result<Matrix, Error> {
    for _ in 0..KEYGEN_RETRIES {
        let m = random_f_matrix(tw, size, size, rng);
        if m.rank(tw) == size {
            return Ok(m);
        }
    }
    Err(Error::KeygenRetriesExceeded(KEYGEN_RETRIES))
}

/// y = msg·G_pub + e for a message over the alphabet and an error of weight
/// at most t. The error is caller-chosen so that sweeps and known-answer
/// tests stay deterministic; sampling belongs to the caller.
pub fn mceliece_encrypt(
    pk: &McEliecePublicKey,
    msg: &[Fe],
    e: &ErrorVector,
) -> Result<Vec<Fe>, Error> {
    let tw = pk.tower();
    let k = pk.params.k();
    if msg.len() != k {
        return Err(Error::LengthMismatch { expected: k, got: msg.len() });
    }
    if e.len() != pk.params.n {
        return Err(Error::LengthMismatch { expected: pk.params.n, got: e.len() });
    }
    if e.weight() > pk.params.t {
        return Err(Error::param("error weight exceeds the correction capability"));
    }
    if msg.iter().chain(e.values()).any(|&v| !tw.in_subfield_f(v)) {
        return Err(Error::param("message and error must lie in the alphabet"));
    }
    let word = pk.g_pub.transpose().mul_vec(tw, msg)?;
    Ok(word.iter().zip(e.values()).map(|(&w, &v)| tw.add(w, v)).collect())
}

/// Decode away the error, then recover the message through a right inverse
/// of the public generator.
pub fn mceliece_decrypt(
    sk: &GoppaCode,
    pk: &McEliecePublicKey,
    y: &[Fe],
) -> Result<Vec<Fe>, Error> {
    let tw = pk.tower();
    if sk.n() != pk.params.n || sk.t() != pk.params.t || sk.tower().spec() != tw.spec() {
        return Err(Error::param("secret key does not match the public key"));
    }
    if y.len() != pk.params.n {
        return Err(Error::LengthMismatch { expected: pk.params.n, got: y.len() });
    }
    let e = match decode(sk, y) {
        Ok(e) => e,
        Err(Error::Undecodable(_)) => {
            return Err(Error::InvalidCryptogram("no weight-t explanation".into()));
        }
        Err(err) => return Err(err),
    };
    let word: Vec<Fe> = y.iter().zip(e.values()).map(|(&a, &b)| tw.sub(a, b)).collect();
    let solved = pk
        .g_pub
        .transpose()
        .solve(tw, &word)?
        .ok_or_else(|| Error::InvalidCryptogram("stripped word is outside the public code".into()))?;
    let (msg, unique) = solved;
    debug_assert!(unique);
    Ok(msg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectors::{appendix_b as refb, param_tables};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::collections::HashSet;

    fn appb_params() -> Params {
        Params::new(16, 2, 2, 8, 1, 4).unwrap()
    }

    fn toy_params() -> Params {
        Params::new(16, 2, 2, 4, 2, 4).unwrap()
    }

    #[test]
    fn parameter_search_matches_published_tables() {
        let found = search_parameters(4096, 25, 2, 1).unwrap();
        assert_eq!(found, param_tables::N4096_T25.to_vec());

        let wide = search_parameters(2560, 22, 2, 4).unwrap();
        assert_eq!(wide.len(), param_tables::N2560_T22_COUNT);
        let (m_lo, m_hi) = param_tables::N2560_T22_M_RANGE;
        assert!(wide.iter().all(|&(m, _)| (m_lo..=m_hi).contains(&m)));
        let mut sorted = wide.clone();
        sorted.sort();
        assert_eq!(wide, sorted);
        let ms: Vec<u32> = wide.iter().map(|&(m, _)| m).collect();
        assert!(ms.contains(&m_lo) && ms.contains(&m_hi));
        // the first row opens at delta=12, the last tops out at delta=58,
        // and in between delta dips as low as 8
        let row_lo: Vec<u32> = wide.iter().filter(|&&(m, _)| m == m_lo).map(|&(_, dl)| dl).collect();
        assert_eq!(row_lo.first(), Some(&param_tables::N2560_T22_FIRST_DELTA));
        let row_hi: Vec<u32> = wide.iter().filter(|&&(m, _)| m == m_hi).map(|&(_, dl)| dl).collect();
        assert_eq!(row_hi.last(), Some(&param_tables::N2560_T22_LAST_DELTA));
        assert_eq!(wide.iter().map(|&(_, dl)| dl).max(), Some(param_tables::N2560_T22_LAST_DELTA));
        assert_eq!(wide.iter().map(|&(_, dl)| dl).min(), Some(param_tables::N2560_T22_MIN_DELTA));

        let small = search_parameters(16, 2, 2, 8).unwrap();
        assert!(small.contains(&(1, 4)));

        assert!(matches!(
            search_parameters(16, 7, 2, 1),
            Err(Error::NoAdmissibleParameters)
        ));
        assert!(matches!(
            search_parameters(16, 8, 2, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn admissible_pairs_yield_valid_params() {
        let mut rng = ChaCha12Rng::seed_from_u64(45);
        for &(m, delta) in search_parameters(4096, 25, 2, 1).unwrap().iter() {
            let params = Params::from_pair(4096, 25, 2, 1, m, delta, &mut rng).unwrap();
            assert_eq!(params.delta(), delta);
            assert!(params.mu() >= 2);
            assert_eq!(params.k(), 4096 - 50 * (4096 / 100));
        }
        assert_eq!(appb_params().k(), 8);
        assert_eq!(appb_params().delta(), 4);
        assert_eq!(appb_params().mu(), 2);
    }

    #[test]
    fn params_validation_rejects_bad_shapes() {
        assert!(Params::new(16, 0, 2, 8, 1, 4).is_err());
        assert!(Params::new(16, 8, 2, 8, 1, 4).is_err());
        // m outside the window on either side
        assert!(Params::new(16, 2, 2, 8, 3, 4).is_err());
        assert!(Params::new(160, 2, 2, 8, 1, 4).is_err());
        // trivial automorphism: s = dm makes mu = 1
        assert!(Params::new(16, 2, 2, 8, 1, 8).is_err());
        assert!(Params::new(16, 2, 2, 8, 1, 0).is_err());
        assert!(Params::new(16, 2, 2, 8, 1, 9).is_err());
        // alphabet too small to host 16 points: delta = 2 gives mu(p^2-1) = 6
        assert!(Params::new(16, 2, 2, 2, 2, 2).is_err());
        assert!(Params::from_pair(16, 2, 2, 8, 1, 3, &mut ChaCha12Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn reference_public_matrix() {
        let code = refb::code();
        let ring = refb::ring();
        let tw = code.tower();
        let published = refb::public_matrix(&ring);
        let h = code.parity_check_matrix();

        // the published row space contains the parity rows
        let stacked = published.vstack(&h).unwrap();
        assert_eq!(stacked.rank(tw), 8);

        // greedily pull published rows that extend the parity row space;
        // those rows are an augmentation A that completes the rank
        let mut acc = h.clone();
        let mut a_rows: Vec<Vec<Fe>> = Vec::new();
        for i in 0..published.rows() {
            let cand = Matrix::from_rows(vec![published.row(i).to_vec()]).unwrap();
            let grown = acc.vstack(&cand).unwrap();
            if grown.rank(tw) > acc.rank(tw) {
                a_rows.push(published.row(i).to_vec());
                acc = grown;
            }
        }
        assert_eq!(h.rank(tw) + a_rows.len(), 8);
        let a = Matrix::from_rows(a_rows).unwrap();
        assert_eq!(a.rank(tw), a.rows());

        let h_pub = assemble_public_matrix(&code, 8, &a).unwrap();
        assert_eq!(h_pub, published);

        // an A that cannot complete the rank is rejected
        let short = Matrix::zero(0, 16);
        assert!(assemble_public_matrix(&code, 8, &short).is_err());
    }

    #[test]
    fn keygen_produces_valid_keys() {
        for (params, seed) in [(appb_params(), 46u64), (toy_params(), 47u64)] {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let (pk, sk) = keygen(&params, &mut rng).unwrap();
            let tw = pk.tower();
            let k = params.k();
            assert_eq!(pk.matrix().rows(), params.n() - k);
            assert_eq!(pk.matrix().cols(), params.n());
            assert!(pk.matrix().is_canonical_rref());

            // rate claim for this family
            assert!(2 * k >= params.n() && 5 * k <= 4 * params.n());

            // kernel(H_pub) has dimension k and sits inside the private code
            let kernel = pk.matrix().kernel_basis(tw);
            assert_eq!(kernel.len(), k);
            let h = sk.parity_check_matrix();
            for v in &kernel {
                assert!(h.mul_vec(tw, v).unwrap().iter().all(|c| c.is_zero()));
            }

            // determinism: same seed, same keys, byte for byte
            let mut rng2 = ChaCha12Rng::seed_from_u64(seed);
            let (pk2, sk2) = keygen(&params, &mut rng2).unwrap();
            assert_eq!(
                serde_json::to_string(&pk.to_spec()).unwrap(),
                serde_json::to_string(&pk2.to_spec()).unwrap()
            );
            assert_eq!(
                serde_json::to_string(&sk.to_spec()).unwrap(),
                serde_json::to_string(&sk2.to_spec()).unwrap()
            );

            // and a fresh seed moves the key
            let mut rng3 = ChaCha12Rng::seed_from_u64(seed + 1000);
            let (pk3, _) = keygen(&params, &mut rng3).unwrap();
            assert_ne!(
                serde_json::to_string(&pk.to_spec()).unwrap(),
                serde_json::to_string(&pk3.to_spec()).unwrap()
            );

            // serialization round-trips
            let back = PublicKey::from_spec(&pk.to_spec()).unwrap();
            assert_eq!(back.matrix(), pk.matrix());
        }
    }

    #[test]
    fn reference_cryptogram_roundtrip() {
        let code = refb::code();
        let ring = refb::ring();
        let pk = PublicKey::new(appb_params(), code.ring().tower_arc(), refb::public_matrix(&ring))
            .unwrap();
        let e = ErrorVector::new(refb::error_vector(&ring));

        let (c, ss) = encapsulate_error(&pk, &e).unwrap();
        assert_eq!(c.values(), refb::cryptogram(&ring).as_slice());

        // identity left block: the preimage puts c on the first 8 positions
        assert_eq!(pk.pivots(), (0..8).collect::<Vec<_>>());
        let mut y = vec![Fe::ZERO; 16];
        for (i, &v) in c.values().iter().enumerate() {
            y[i] = v;
        }
        assert_eq!(y, refb::received_word(&ring));

        assert_eq!(decap(&code, &pk, &c).unwrap(), ss);

        // weight enforcement
        assert!(encapsulate_error(&pk, &ErrorVector::zero(16)).is_err());
        let single = {
            let mut v = vec![Fe::ZERO; 16];
            v[3] = Fe::ONE;
            ErrorVector::new(v)
        };
        assert!(encapsulate_error(&pk, &single).is_err());

        // cryptogram serialization round-trip
        let tw = code.tower();
        let spec = c.to_spec(tw);
        assert_eq!(Cryptogram::from_spec(tw, &spec).unwrap(), c);
        let mut bad = spec.clone();
        bad.version = 99;
        assert!(Cryptogram::from_spec(tw, &bad).is_err());
    }

    #[test]
    fn exhaustive_toy_roundtrip() {
        let params = toy_params();
        let mut rng = ChaCha12Rng::seed_from_u64(48);
        let (pk, sk) = keygen(&params, &mut rng).unwrap();
        let tw = sk.tower();
        let nonzero: Vec<Fe> = tw
            .elements()
            .filter(|&v| tw.in_subfield_f(v) && !v.is_zero())
            .collect();
        assert_eq!(nonzero.len(), 15);

        let mut trials = 0usize;
        for i in 0..16 {
            for j in (i + 1)..16 {
                for &a in &nonzero {
                    for &b in &nonzero {
                        let mut v = vec![Fe::ZERO; 16];
                        v[i] = a;
                        v[j] = b;
                        let e = ErrorVector::new(v);
                        let (c, ss) = encapsulate_error(&pk, &e).unwrap();
                        assert_eq!(decap(&sk, &pk, &c).unwrap(), ss);
                        trials += 1;
                    }
                }
            }
        }
        assert_eq!(trials, 120 * 225);

        // the zero cryptogram decapsulates to the hash of the zero error
        let zero = Cryptogram { values: vec![Fe::ZERO; 8] };
        assert_eq!(decap(&sk, &pk, &zero).unwrap(), hash_error(tw, &ErrorVector::zero(16)));

        // alphabet violations are rejected
        let outside = tw.elements().find(|&v| !tw.in_subfield_f(v)).unwrap();
        let mut vals = vec![Fe::ZERO; 8];
        vals[0] = outside;
        let bad = Cryptogram { values: vals };
        assert!(matches!(decap(&sk, &pk, &bad), Err(Error::InvalidCryptogram(_))));
        let short = Cryptogram { values: vec![Fe::ZERO; 7] };
        assert!(matches!(decap(&sk, &pk, &short), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn random_roundtrip_and_tamper() {
        let params = appb_params();
        let mut rng = ChaCha12Rng::seed_from_u64(49);
        let (pk, sk) = keygen(&params, &mut rng).unwrap();
        let tw = pk.tower();

        let mut rejected = 0usize;
        for _ in 0..1000 {
            let (c, ss) = encap(&pk, &mut rng).unwrap();
            assert_eq!(decap(&sk, &pk, &c).unwrap(), ss);

            // corrupt one coordinate; either rejection or a different secret
            let mut vals = c.values().to_vec();
            let slot = rng.gen_range(0..vals.len());
            vals[slot] = tw.add(vals[slot], Fe::ONE);
            match decap(&sk, &pk, &Cryptogram { values: vals }) {
                Err(Error::InvalidCryptogram(_)) => rejected += 1,
                Err(err) => panic!("unexpected decap error: {err}"),
                Ok(other) => assert_ne!(other, ss),
            }
        }
        assert!(rejected > 0);

        // sampled errors have weight exactly t with nonzero alphabet values
        for _ in 0..200 {
            let e = random_error(tw, params.n(), params.t(), &mut rng);
            assert_eq!(e.weight(), params.t());
            assert!(e.values().iter().all(|&v| tw.in_subfield_f(v)));
        }
    }

    #[test]
    fn mceliece_roundtrip() {
        let params = toy_params();
        let mut rng = ChaCha12Rng::seed_from_u64(50);
        let (pk, sk) = mceliece_keygen(&params, &mut rng).unwrap();
        let tw = pk.tower();
        let k = params.k();
        assert_eq!(pk.matrix().rows(), k);
        assert_eq!(pk.matrix().rank(tw), k);

        // public generator rows live in the private code
        let h = sk.parity_check_matrix();
        for i in 0..k {
            assert!(h.mul_vec(tw, pk.matrix().row(i)).unwrap().iter().all(|c| c.is_zero()));
        }

        let msg: Vec<Fe> = (0..k).map(|_| tw.random_f(&mut rng)).collect();
        let alphabet: Vec<Fe> =
            tw.elements().filter(|&v| tw.in_subfield_f(v) && !v.is_zero()).collect();

        // zero error and all weight-one and weight-two patterns
        let zero = ErrorVector::zero(16);
        let y = mceliece_encrypt(&pk, &msg, &zero).unwrap();
        assert_eq!(mceliece_decrypt(&sk, &pk, &y).unwrap(), msg);

        for i in 0..16 {
            for &a in &alphabet {
                let mut v = vec![Fe::ZERO; 16];
                v[i] = a;
                let e = ErrorVector::new(v);
                let y = mceliece_encrypt(&pk, &msg, &e).unwrap();
                assert_eq!(mceliece_decrypt(&sk, &pk, &y).unwrap(), msg);
            }
        }
        for i in 0..16 {
            for j in (i + 1)..16 {
                for &a in &alphabet {
                    for &b in &alphabet {
                        let mut v = vec![Fe::ZERO; 16];
                        v[i] = a;
                        v[j] = b;
                        let e = ErrorVector::new(v);
                        let y = mceliece_encrypt(&pk, &msg, &e).unwrap();
                        assert_eq!(mceliece_decrypt(&sk, &pk, &y).unwrap(), msg);
                    }
                }
            }
        }

        // overweight errors are refused at encryption time
        let mut v = vec![Fe::ZERO; 16];
        v[0] = alphabet[0];
        v[1] = alphabet[0];
        v[2] = alphabet[0];
        assert!(mceliece_encrypt(&pk, &msg, &ErrorVector::new(v)).is_err());
    }

    #[test]
    fn hash_is_deterministic_and_collision_free() {
        let params = toy_params();
        let tw = params.tower().unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(51);

        let e = random_error(&tw, 16, 2, &mut rng);
        assert_eq!(hash_error(&tw, &e), hash_error(&tw, &e));

        let mut inputs: HashSet<Vec<u8>> = HashSet::new();
        let mut digests: HashSet<[u8; 32]> = HashSet::new();
        for _ in 0..100_000 {
            let w = rng.gen_range(1..=3);
            let e = random_error(&tw, 16, w, &mut rng);
            inputs.insert(error_bytes(&tw, &e));
            digests.insert(*hash_error(&tw, &e).bytes());
        }
        assert_eq!(inputs.len(), digests.len());
    }

    #[test]
    fn error_serialization_roundtrips() {
        let tw = FieldTower::new(2, 4, 1, 4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(52);
        for _ in 0..200 {
            let e = random_error(&tw, 11, rng.gen_range(0..=4), &mut rng);
            let bytes = error_bytes(&tw, &e);
            assert_eq!(bytes.len(), 8 + 11 * tw.fe_bytes());
            assert_eq!(error_from_bytes(&tw, &bytes).unwrap(), e);
        }
        let e = random_error(&tw, 5, 2, &mut rng);
        let mut bytes = error_bytes(&tw, &e);
        bytes.push(0);
        assert!(error_from_bytes(&tw, &bytes).is_err());
        assert!(error_from_bytes(&tw, &bytes[..7]).is_err());
        // 0xff is no packing of an F_16 element
        let mut bad = error_bytes(&tw, &e);
        let last = bad.len() - 1;
        bad[last] = 0xff;
        assert!(error_from_bytes(&tw, &bad).is_err());
    }

    #[test]
    fn midsize_keypair_roundtrips() {
        let params = Params::new(256, 8, 2, 4, 4, 8).unwrap();
        assert_eq!(params.k(), 128);
        assert_eq!(params.delta(), 8);
        assert_eq!(params.mu(), 2);

        let mut rng = ChaCha12Rng::seed_from_u64(53);
        let (pk, sk) = keygen(&params, &mut rng).unwrap();
        assert_eq!(pk.matrix().rows(), 128);
        assert_eq!(pk.matrix().cols(), 256);
        assert!(pk.matrix().is_canonical_rref());

        for _ in 0..5 {
            let (c, ss) = encap(&pk, &mut rng).unwrap();
            assert_eq!(decap(&sk, &pk, &c).unwrap(), ss);
        }
    }
}
