//! Skew Goppa codes. A code is determined by an invariant polynomial g of
//! degree 2t, P-independent evaluation points coprime with g, and nonzero
//! column multipliers. The parity check polynomials are the inverses of
//! x - α_i modulo g; syndromes live in R/Rg and the parity check matrix over
//! the alphabet F expands their coefficients coordinate-wise.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::Matrix;
use crate::ore::{OrePoly, OreRing};
use crate::par;
use crate::pindep::PointSet;
use crate::tower::{Fe, FieldTower, TowerSpec};

/// Syndrome polynomial, always of degree < 2t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromePoly(OrePoly);

impl SyndromePoly {
    pub fn poly(&self) -> &OrePoly {
        &self.0
    }

    pub fn into_poly(self) -> OrePoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// An immutable skew Goppa code over the alphabet F.
#[derive(Clone)]
pub struct GoppaCode {
    ring: OreRing,
    points: PointSet,
    etas: Vec<Fe>,
    g: OrePoly,
    h: Vec<OrePoly>,
    t: usize,
}

/// Sample an invariant Goppa polynomial of degree 2t: g = h(x^μ)·x^{2t mod μ}
/// where h is monic over K with no roots in K. Such a g has no right roots
/// in L*, so every nonzero point is usable.
pub fn make_goppa_poly<R: Rng + ?Sized>(
    t_param: usize,
    ring: &OreRing,
    rng: &mut R,
) -> Result<OrePoly, Error> {
    if t_param == 0 {
        return Err(Error::param("correction capability must be positive"));
    }
    if ring.has_derivation() {
        return Err(Error::param("Goppa polynomial sampling requires the twisted ring"));
    }
    let tw = ring.tower();
    if tw.order_of_k() > 1 << 16 {
        return Err(Error::param("fixed field too large for exhaustive root screening"));
    }
    let mu = tw.mu() as usize;
    let hdeg = 2 * t_param / mu;
    let rem = (2 * t_param) % mu;
    if hdeg == 1 {
        // a monic linear polynomial over K always has its root in K
        return Err(Error::param(
            "floor(2t/mu) = 1 admits no root-free polynomial; adjust t or the automorphism",
        ));
    }
    loop {
        let mut coeffs: Vec<Fe> = (0..hdeg).map(|_| tw.random_k(rng)).collect();
        coeffs.push(Fe::ONE);
        // exhaustive root screen over K, zero included
        let root_free = tw.k_elements().all(|c| {
            let mut acc = Fe::ZERO;
            for &hk in coeffs.iter().rev() {
                acc = tw.add(tw.mul(acc, c), hk);
            }
            !acc.is_zero()
        });
        if !root_free {
            continue;
        }
        let mut gc = vec![Fe::ZERO; 2 * t_param + 1];
        for (k, &hk) in coeffs.iter().enumerate() {
            gc[k * mu + rem] = hk;
        }
        let g = OrePoly::from_coeffs(gc);
        debug_assert_eq!(g.deg(), Some(2 * t_param));
        debug_assert!(ring.is_invariant(&g));
        return Ok(g);
    }
}

/// Build a code from validated parts: checks the ring is twisted, g is
/// invariant of even degree, every point stays coprime with g, and computes
/// the parity polynomials (in parallel when the feature is on).
pub fn build_code(
    ring: OreRing,
    points: PointSet,
    etas: Vec<Fe>,
    g: OrePoly,
) -> Result<GoppaCode, Error> {
    if ring.has_derivation() {
        return Err(Error::param("code construction requires the twisted ring"));
    }
    let n = points.len();
    if etas.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: etas.len() });
    }
    if etas.iter().any(|e| e.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let g = ring.monic(&g);
    let two_t = g.deg().ok_or_else(|| Error::param("zero Goppa polynomial"))?;
    if two_t < 2 || two_t % 2 != 0 {
        return Err(Error::param("Goppa polynomial degree must be even and at least 2"));
    }
    if !ring.is_invariant(&g) {
        return Err(Error::NotInvariant);
    }
    for (i, &a) in points.points().iter().enumerate() {
        // for invariant g this right-root test is equivalent to the
        // left-sided coprimality the inversion needs
        if ring.eval_right(&g, a).is_zero() {
            return Err(Error::param(format!(
                "evaluation point {i} is a right root of the Goppa polynomial"
            )));
        }
    }
    let results = par::map_indexed(points.points(), |i, &a| {
        let tw = ring.tower();
        let lin = OrePoly::from_coeffs(vec![tw.neg(a), Fe::ONE]);
        ring.invert_mod_assuming_invariant(&lin, &g).map_err(|_| {
            Error::param(format!("evaluation point {i} shares a factor with the Goppa polynomial"))
        })
    });
    let mut h = Vec::with_capacity(n);
    for (i, res) in results.into_iter().enumerate() {
        let hp = res?;
        if hp.deg() != Some(two_t - 1) {
            return Err(Error::param(format!("parity polynomial {i} has unexpected degree")));
        }
        h.push(hp);
    }
    Ok(GoppaCode { ring, points, etas, g, h, t: two_t / 2 })
}

impl GoppaCode {
    /// Convenience constructor with all column multipliers equal to one.
    pub fn with_unit_etas(ring: OreRing, points: PointSet, g: OrePoly) -> Result<GoppaCode, Error> {
        let n = points.len();
        build_code(ring, points, vec![Fe::ONE; n], g)
    }

    pub fn ring(&self) -> &OreRing {
        &self.ring
    }

    pub fn tower(&self) -> &FieldTower {
        self.ring.tower()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn etas(&self) -> &[Fe] {
        &self.etas
    }

    pub fn goppa_poly(&self) -> &OrePoly {
        &self.g
    }

    pub fn parity_polys(&self) -> &[OrePoly] {
        &self.h
    }

    /// Correction capability: half the degree of g.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// s = Σ_i h_i·η_i·y_i, of degree < 2t; zero exactly on codewords.
    pub fn syndrome(&self, y: &[Fe]) -> Result<SyndromePoly, Error> {
        let n = self.n();
        if y.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: y.len() });
        }
        let tw = self.ring.tower();
        let mut s = OrePoly::zero();
        for ((hp, &eta), &yi) in self.h.iter().zip(&self.etas).zip(y) {
            if yi.is_zero() {
                continue;
            }
            if !tw.in_subfield_f(yi) {
                return Err(Error::param("word coordinate outside the code alphabet"));
            }
            s = self.ring.add(&s, &self.ring.times_const(hp, tw.mul(eta, yi)));
        }
        debug_assert!(s.deg().map_or(true, |d| d < 2 * self.t));
        Ok(SyndromePoly(s))
    }


    /// Parity check matrix over F, shape (2t·m) × n: row block j holds the
    /// F-coordinates of σ^{-j}(h_{i,j})·η_i. Its F-kernel is the code.
    pub fn parity_check_matrix(&self) -> Matrix {
        let tw = self.ring.tower();
        let m = tw.m() as usize;
        let two_t = 2 * self.t;
        let mut out = Matrix::zero(two_t * m, self.n());
        for (i, (hp, &eta)) in self.h.iter().zip(&self.etas).enumerate() {
            for j in 0..two_t {
                let v = tw.mul(tw.sigma_pow(hp.coeff(j), -(j as i64)), eta);
                for (l, &c) in tw.coordinates(v).iter().enumerate() {
                    out.set(j * m + l, i, c);
                }
            }
        }
        out
    }

    pub fn to_spec(&self) -> CodeSpec {
        let tw = self.ring.tower();
        CodeSpec {
            version: CODE_SPEC_VERSION,
            tower: tw.spec(),
            g: self.ring.poly_to_hex(&self.g),
            points: self.points.points().iter().map(|&p| tw.fe_to_hex(p)).collect(),
            etas: self.etas.iter().map(|&e| tw.fe_to_hex(e)).collect(),
            parity: self.h.iter().map(|hp| self.ring.poly_to_hex(hp)).collect(),
        }
    }

    /// Rebuild from a serialized spec. The parity polynomials are recomputed
    /// and must agree with the stored ones bit for bit.
    pub fn from_spec(spec: &CodeSpec) -> Result<GoppaCode, Error> {
        if spec.version != CODE_SPEC_VERSION {
            return Err(Error::Format(format!(
                "unsupported private key version {}",
                spec.version
            )));
        }
        let tower = FieldTower::from_spec(&spec.tower)?;
        let ring = OreRing::twisted(std::sync::Arc::new(tower));
        let tw = ring.tower();
        let g = ring.poly_from_hex(&spec.g)?;
        let pts = spec
            .points
            .iter()
            .map(|h| tw.fe_from_hex(h))
            .collect::<Result<Vec<_>, _>>()?;
        let etas = spec
            .etas
            .iter()
            .map(|h| tw.fe_from_hex(h))
            .collect::<Result<Vec<_>, _>>()?;
        let points = PointSet::new(&ring, pts)?;
        let code = build_code(ring, points, etas, g)?;
        if spec.parity.len() != code.h.len() {
            return Err(Error::Format("parity polynomial count mismatch".into()));
        }
        for (stored, computed) in spec.parity.iter().zip(&code.h) {
            if &code.ring.poly_from_hex(stored)? != computed {
                return Err(Error::Format(
                    "stored parity polynomials do not match the code".into(),
                ));
            }
        }
        Ok(code)
    }
}

pub const CODE_SPEC_VERSION: u32 = 1;

/// Serialized private form of a code: versioned, hex-encoded, bit-exact.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeSpec {
    pub version: u32,
    pub tower: TowerSpec,
    pub g: Vec<String>,
    pub points: Vec<String>,
    pub etas: Vec<String>,
    pub parity: Vec<Vec<String>>,
}
