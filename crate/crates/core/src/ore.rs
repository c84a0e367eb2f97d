//! Ore (skew) polynomials over the field tower: the ring L[x; σ, ∂] with the
//! commutation rule x·a = σ(a)·x + ∂(a). ∂ defaults to zero; a user-supplied
//! σ-derivation is accepted after validation on an F_p-basis. Left and right
//! division both exist because σ is an automorphism, which gives the two
//! extended Euclidean algorithms, gcrd/gcld, and lclm/lcrm.

use std::sync::Arc;

use rand::Rng;

use crate::error::Error;
use crate::tower::{Fe, FieldTower};

/// Skew polynomial, little-endian coefficients, no trailing zeros. Context
/// (tower and derivation) lives in [`OreRing`]; all operations are ring
/// methods, so polynomials from different rings cannot meet.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OrePoly {
    coeffs: Vec<Fe>,
}

impl OrePoly {
    pub fn zero() -> Self {
        OrePoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        OrePoly { coeffs: vec![Fe::ONE] }
    }

    pub fn constant(c: Fe) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// c·x^k.
    pub fn monomial(c: Fe, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Fe::ZERO; k + 1];
        coeffs[k] = c;
        OrePoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        OrePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs.get(k).copied().unwrap_or(Fe::ZERO)
    }

    /// None encodes deg(0) = -infinity.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }
}

/// σ-derivation given by its images on the F_p-power-basis of L.
#[derive(Clone, Debug)]
struct Derivation {
    images: Vec<Fe>,
}

/// The ring L[x; σ, ∂]. Cheap to clone; share freely across threads.
#[derive(Clone)]
pub struct OreRing {
    tower: Arc<FieldTower>,
    derivation: Option<Derivation>,
}

/// Which sided Euclidean run produced a table.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Side {
    /// r_i = u_i·f + v_i·g (left division of remainders).
    Left,
    /// r_i = f·u_i + g·v_i (right division of remainders).
    Right,
}

#[derive(Clone, Debug)]
pub struct EuclideanRow {
    pub u: OrePoly,
    pub v: OrePoly,
    pub r: OrePoly,
    /// Quotient that produced this row; None on the two seed rows.
    pub q: Option<OrePoly>,
}

/// Full history of an extended Euclidean run, rows 0..=last.
#[derive(Clone, Debug)]
pub struct EuclideanTable {
    pub side: Side,
    pub rows: Vec<EuclideanRow>,
    /// True when a stop_deg cut the run before the zero remainder.
    pub stopped_early: bool,
}

impl EuclideanTable {
    /// Index of the last row with a nonzero remainder (the gcrd/gcld row on
    /// a completed run), None when both inputs were zero.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.rows.iter().rposition(|row| !row.r.is_zero())
    }

    pub fn final_row(&self) -> &EuclideanRow {
        self.rows.last().expect("table has at least two rows")
    }
}

impl OreRing {
    /// The twisted polynomial ring L[x; σ] (∂ = 0).
    pub fn twisted(tower: Arc<FieldTower>) -> OreRing {
        OreRing { tower, derivation: None }
    }

    /// L[x; σ, ∂] with ∂ given by images of the F_p-basis {z^i}. The map is
    /// extended F_p-linearly; the Leibniz rule ∂(ab) = σ(a)∂(b) + ∂(a)b is
    /// validated on all basis pairs, which is equivalent to validating it
    /// everywhere.
    pub fn with_derivation(tower: Arc<FieldTower>, images: Vec<Fe>) -> Result<OreRing, Error> {
        let dm = tower.ext_degree() as usize;
        if images.len() != dm {
            return Err(Error::LengthMismatch { expected: dm, got: images.len() });
        }
        let ring = OreRing { tower, derivation: Some(Derivation { images }) };
        let t = ring.tower();
        let mut basis_pow = Vec::with_capacity(dm);
        let mut pw = Fe::ONE;
        for _ in 0..dm {
            basis_pow.push(pw);
            pw = t.mul(pw, t.z());
        }
        for (i, &a) in basis_pow.iter().enumerate() {
            for (j, &b) in basis_pow.iter().enumerate() {
                let lhs = ring.derive(t.mul(a, b));
                let rhs = t.add(
                    t.mul(t.sigma(a), ring.derive(b)),
                    t.mul(ring.derive(a), b),
                );
                if lhs != rhs {
                    return Err(Error::param(format!(
                        "derivation violates the Leibniz rule on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(ring)
    }

    /// The inner derivation ∂(a) = c·(σ(a) - a), always a valid σ-derivation.
    pub fn inner_derivation(tower: Arc<FieldTower>, c: Fe) -> OreRing {
        let dm = tower.ext_degree() as usize;
        let mut images = Vec::with_capacity(dm);
        let mut pw = Fe::ONE;
        for _ in 0..dm {
            images.push(tower.mul(c, tower.sub(tower.sigma(pw), pw)));
            pw = tower.mul(pw, tower.z());
        }
        OreRing { tower, derivation: Some(Derivation { images }) }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> Arc<FieldTower> {
        Arc::clone(&self.tower)
    }

    pub fn has_derivation(&self) -> bool {
        self.derivation.is_some()
    }

    /// The conjugate γ^{c} = (σ(c)·γ + ∂(c))·c^{-1} for nonzero c. Right
    /// roots of a fixed polynomial sweep out exactly the conjugates of one
    /// root, and the product rule eval(f·g, γ) = eval(f, γ^{e})·eval(g, γ)
    /// with e = eval(g, γ) ≠ 0 is stated through it.
    pub fn conjugate(&self, gamma: Fe, c: Fe) -> Fe {
        let t = self.tower();
        assert!(!c.is_zero(), "conjugation by zero");
        let num = t.add(t.mul(t.sigma(c), gamma), self.derive(c));
        t.div(num, c)
    }

    /// ∂(a); zero when the ring carries no derivation.
    pub fn derive(&self, a: Fe) -> Fe {
        let Some(der) = &self.derivation else {
            return Fe::ZERO;
        };
        let t = self.tower();
        let mut acc = Fe::ZERO;
        for (digit, &img) in t.unpack(a.raw()).into_iter().zip(&der.images) {
            if digit != 0 {
                acc = t.add(acc, t.mul(t.scalar(digit), img));
            }
        }
        acc
    }

    pub fn add(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        let t = self.tower();
        let n = f.coeffs.len().max(g.coeffs.len());
        let coeffs = (0..n).map(|i| t.add(f.coeff(i), g.coeff(i))).collect();
        OrePoly::from_coeffs(coeffs)
    }

    pub fn neg(&self, f: &OrePoly) -> OrePoly {
        let t = self.tower();
        OrePoly::from_coeffs(f.coeffs.iter().map(|&c| t.neg(c)).collect())
    }

    pub fn sub(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        self.add(f, &self.neg(g))
    }

    /// c·f (left scalar multiple; coefficients scale on the left).
    pub fn scale_left(&self, c: Fe, f: &OrePoly) -> OrePoly {
        let t = self.tower();
        OrePoly::from_coeffs(f.coeffs.iter().map(|&a| t.mul(c, a)).collect())
    }

    /// x·f, by the commutation rule.
    fn times_x(&self, f: &OrePoly) -> OrePoly {
        let t = self.tower();
        let mut out = vec![Fe::ZERO; f.coeffs.len() + 1];
        for (k, &a) in f.coeffs.iter().enumerate() {
            out[k + 1] = t.add(out[k + 1], t.sigma(a));
            let da = self.derive(a);
            if !da.is_zero() {
                out[k] = t.add(out[k], da);
            }
        }
        OrePoly::from_coeffs(out)
    }

    pub fn mul(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        if f.is_zero() || g.is_zero() {
            return OrePoly::zero();
        }
        let t = self.tower();
        if self.derivation.is_none() {
            // (f·g)_{i+j} += f_i σ^i(g_j)
            let mut out = vec![Fe::ZERO; f.coeffs.len() + g.coeffs.len() - 1];
            for (i, &fi) in f.coeffs.iter().enumerate() {
                if fi.is_zero() {
                    continue;
                }
                for (j, &gj) in g.coeffs.iter().enumerate() {
                    if gj.is_zero() {
                        continue;
                    }
                    out[i + j] = t.add(out[i + j], t.mul(fi, t.sigma_pow(gj, i as i64)));
                }
            }
            return OrePoly::from_coeffs(out);
        }
        let mut acc = OrePoly::zero();
        let mut xig = g.clone();
        for &fi in &f.coeffs {
            if !fi.is_zero() {
                acc = self.add(&acc, &self.scale_left(fi, &xig));
            }
            xig = self.times_x(&xig);
        }
        acc
    }

    /// f·c for a constant c.
    pub fn times_const(&self, f: &OrePoly, c: Fe) -> OrePoly {
        self.mul(f, &OrePoly::constant(c))
    }

    /// Monic normalization by a left unit; zero stays zero. Left scaling
    /// preserves "is a left multiple of f" and "is a right divisor of f",
    /// so this is the right normalizer for gcrd and lclm.
    pub fn monic(&self, f: &OrePoly) -> OrePoly {
        if f.is_zero() || f.is_monic() {
            return f.clone();
        }
        self.scale_left(self.tower().inv(f.lead()), f)
    }

    /// Monic normalization by a right unit: f·c with c = σ^{-deg f}(lead^-1).
    /// Right scaling preserves "is a right multiple of f" and "is a left
    /// divisor of f", the gcld and lcrm sides.
    pub fn monic_right(&self, f: &OrePoly) -> OrePoly {
        if f.is_zero() || f.is_monic() {
            return f.clone();
        }
        let t = self.tower();
        let n = f.deg().unwrap() as i64;
        let c = t.sigma_pow(t.inv(f.lead()), -n);
        self.times_const(f, c)
    }

    /// Left division: f = q·d + r with deg r < deg d.
    pub fn l_divmod(&self, f: &OrePoly, d: &OrePoly) -> Result<(OrePoly, OrePoly), Error> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = self.tower();
        let nd = d.deg().unwrap();
        let mut r = f.clone();
        let mut q = OrePoly::zero();
        while let Some(nr) = r.deg() {
            if nr < nd {
                break;
            }
            let k = nr - nd;
            // leading coefficient of (c x^k)·d is c·σ^k(lead d)
            let c = t.mul(r.lead(), t.inv(t.sigma_pow(d.lead(), k as i64)));
            let term = OrePoly::monomial(c, k);
            q = self.add(&q, &term);
            r = self.sub(&r, &self.mul(&term, d));
            debug_assert!(r.deg().map_or(true, |x| x < nr));
        }
        Ok((q, r))
    }

    /// Right division: f = d·q + r with deg r < deg d.
    pub fn r_divmod(&self, f: &OrePoly, d: &OrePoly) -> Result<(OrePoly, OrePoly), Error> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = self.tower();
        let nd = d.deg().unwrap();
        let d_lead_inv = t.inv(d.lead());
        let mut r = f.clone();
        let mut q = OrePoly::zero();
        while let Some(nr) = r.deg() {
            if nr < nd {
                break;
            }
            let k = nr - nd;
            // leading coefficient of d·(c x^k) is (lead d)·σ^{nd}(c)
            let c = t.sigma_pow(t.mul(d_lead_inv, r.lead()), -(nd as i64));
            let term = OrePoly::monomial(c, k);
            q = self.add(&q, &term);
            r = self.sub(&r, &self.mul(d, &term));
            debug_assert!(r.deg().map_or(true, |x| x < nr));
        }
        Ok((q, r))
    }

    pub fn l_rem(&self, f: &OrePoly, d: &OrePoly) -> Result<OrePoly, Error> {
        Ok(self.l_divmod(f, d)?.1)
    }

    pub fn r_rem(&self, f: &OrePoly, d: &OrePoly) -> Result<OrePoly, Error> {
        Ok(self.r_divmod(f, d)?.1)
    }

    /// Left extended Euclidean algorithm on (f, g): rows satisfy
    /// r_i = u_i·f + v_i·g, remainders come from left division. With
    /// stop_deg = Some(t) the run stops at the first row (from row 1 on)
    /// whose remainder has degree < t; otherwise it runs to the zero
    /// remainder, so the last nonzero row holds gcrd(f, g) and the row after
    /// it gives the lclm via u·f.
    pub fn leea(&self, f: &OrePoly, g: &OrePoly, stop_deg: Option<usize>) -> EuclideanTable {
        self.extended_euclid(f, g, stop_deg, Side::Left)
    }

    /// Right counterpart: rows satisfy r_i = f·u_i + g·v_i; gcld and lcrm.
    pub fn reea(&self, f: &OrePoly, g: &OrePoly, stop_deg: Option<usize>) -> EuclideanTable {
        self.extended_euclid(f, g, stop_deg, Side::Right)
    }

    fn extended_euclid(
        &self,
        f: &OrePoly,
        g: &OrePoly,
        stop_deg: Option<usize>,
        side: Side,
    ) -> EuclideanTable {
        let below = |r: &OrePoly| match (stop_deg, r.deg()) {
            (Some(t), Some(d)) => d < t,
            (Some(_), None) => true,
            (None, _) => false,
        };
        let mut rows = vec![
            EuclideanRow { u: OrePoly::one(), v: OrePoly::zero(), r: f.clone(), q: None },
            EuclideanRow { u: OrePoly::zero(), v: OrePoly::one(), r: g.clone(), q: None },
        ];
        let mut stopped_early = below(&rows[1].r);
        while !stopped_early && !rows.last().unwrap().r.is_zero() {
            let [prev, curr] = &rows[rows.len() - 2..] else { unreachable!() };
            let (q, r) = match side {
                Side::Left => self.l_divmod(&prev.r, &curr.r).unwrap(),
                Side::Right => self.r_divmod(&prev.r, &curr.r).unwrap(),
            };
            let (u, v) = match side {
                Side::Left => (
                    self.sub(&prev.u, &self.mul(&q, &curr.u)),
                    self.sub(&prev.v, &self.mul(&q, &curr.v)),
                ),
                Side::Right => (
                    self.sub(&prev.u, &self.mul(&curr.u, &q)),
                    self.sub(&prev.v, &self.mul(&curr.v, &q)),
                ),
            };
            rows.push(EuclideanRow { u, v, r, q: Some(q) });
            stopped_early = stop_deg.is_some() && below(&rows.last().unwrap().r);
        }
        EuclideanTable { side, rows, stopped_early }
    }

    /// Greatest common right divisor, monic.
    pub fn gcrd(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        let table = self.leea(f, g, None);
        match table.last_nonzero() {
            Some(h) => self.monic(&table.rows[h].r),
            None => OrePoly::zero(),
        }
    }

    /// Greatest common left divisor, monic.
    pub fn gcld(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        let table = self.reea(f, g, None);
        match table.last_nonzero() {
            Some(h) => self.monic_right(&table.rows[h].r),
            None => OrePoly::zero(),
        }
    }

    /// Least common left multiple, monic: the row after the gcrd row gives
    /// lclm(f, g) = u_{h+1}·f.
    pub fn lclm(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        let table = self.leea(f, g, None);
        let lcm = self.mul(&table.final_row().u, f);
        self.monic(&lcm)
    }

    /// Least common right multiple, monic: f·u_{h+1} from the right table.
    pub fn lcrm(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        let table = self.reea(f, g, None);
        let lcm = self.mul(f, &table.final_row().u);
        self.monic_right(&lcm)
    }

    /// Monic lclm of a nonempty sequence.
    pub fn lclm_many<'a, I>(&self, polys: I) -> Result<OrePoly, Error>
    where
        I: IntoIterator<Item = &'a OrePoly>,
    {
        let mut it = polys.into_iter();
        let Some(first) = it.next() else {
            return Err(Error::EmptyInput);
        };
        let mut acc = self.monic(first);
        for f in it {
            acc = self.lclm(&acc, f);
        }
        Ok(acc)
    }

    /// Right evaluation: the constant r with f = q·(x - b) + r, i.e. the
    /// value whose vanishing certifies that b is a right root. With ∂ = 0
    /// this is Σ_j f_j N_j(b) over the truncated norms of b.
    pub fn eval_right(&self, f: &OrePoly, b: Fe) -> Fe {
        let t = self.tower();
        if self.derivation.is_none() {
            let mut acc = Fe::ZERO;
            let mut norm = Fe::ONE; // N_j(b), starting at N_0 = 1
            for (j, &fj) in f.coeffs.iter().enumerate() {
                if !fj.is_zero() {
                    acc = t.add(acc, t.mul(fj, norm));
                }
                norm = t.mul(norm, t.sigma_pow(b, j as i64));
            }
            return acc;
        }
        let divisor = OrePoly::from_coeffs(vec![t.neg(b), Fe::ONE]);
        self.l_rem(f, &divisor).unwrap().coeff(0)
    }

    /// Left evaluation: the constant r with f = (x - b)·q + r. With ∂ = 0
    /// this is Σ_j σ^{-j}(f_j) N_{-j}(b).
    pub fn eval_left(&self, f: &OrePoly, b: Fe) -> Fe {
        let t = self.tower();
        if self.derivation.is_none() {
            let mut acc = Fe::ZERO;
            let mut norm = Fe::ONE; // N_{-j}(b)
            for (j, &fj) in f.coeffs.iter().enumerate() {
                if !fj.is_zero() {
                    acc = t.add(acc, t.mul(t.sigma_pow(fj, -(j as i64)), norm));
                }
                norm = t.mul(norm, t.sigma_pow(b, -(j as i64)));
            }
            return acc;
        }
        let divisor = OrePoly::from_coeffs(vec![t.neg(b), Fe::ONE]);
        self.r_rem(f, &divisor).unwrap().coeff(0)
    }

    /// Whether Rg = gR. Checked on ring generators: g·u ∈ Rg for u = x and
    /// for every F_p-basis element of L, which extends multiplicatively.
    pub fn is_invariant(&self, g: &OrePoly) -> bool {
        if g.is_zero() {
            return true;
        }
        let t = self.tower();
        let gx = self.mul(g, &OrePoly::monomial(Fe::ONE, 1));
        if !self.l_rem(&gx, g).unwrap().is_zero() {
            return false;
        }
        let mut pw = Fe::ONE;
        for _ in 0..t.ext_degree() {
            let gu = self.times_const(g, pw);
            if !self.l_rem(&gu, g).unwrap().is_zero() {
                return false;
            }
            pw = t.mul(pw, t.z());
        }
        true
    }

    /// Two-sided inverse of f modulo the invariant polynomial g, reduced to
    /// degree < deg g: returns h with f·h ≡ h·f ≡ 1 (mod Rg). Errors when g
    /// is not invariant or f is not coprime with g.
    pub fn invert_mod(&self, f: &OrePoly, g: &OrePoly) -> Result<OrePoly, Error> {
        if !self.is_invariant(g) {
            return Err(Error::NotInvariant);
        }
        self.invert_mod_assuming_invariant(f, g)
    }

    /// Same as [`invert_mod`] with the invariance check hoisted out; callers
    /// validate g once and invert many f against it.
    pub(crate) fn invert_mod_assuming_invariant(
        &self,
        f: &OrePoly,
        g: &OrePoly,
    ) -> Result<OrePoly, Error> {
        let t = self.tower();
        let table = self.reea(f, g, None);
        let h = table.last_nonzero().ok_or(Error::NotCoprime)?;
        let row = &table.rows[h];
        if row.r.deg() != Some(0) {
            return Err(Error::NotCoprime);
        }
        // f·u + g·v = c with c a unit: f·(u·c^{-1}) ≡ 1 (mod gR = Rg)
        let inv = self.times_const(&row.u, t.inv(row.r.coeff(0)));
        self.l_rem(&inv, g)
    }

    pub fn random_poly<R: Rng + ?Sized>(&self, deg: usize, rng: &mut R) -> OrePoly {
        let t = self.tower();
        let mut coeffs: Vec<Fe> = (0..=deg).map(|_| t.random_element(rng)).collect();
        coeffs[deg] = t.random_nonzero(rng);
        OrePoly::from_coeffs(coeffs)
    }

    /// Little-endian coefficient list as fixed-width hex strings.
    pub fn poly_to_hex(&self, f: &OrePoly) -> Vec<String> {
        let t = self.tower();
        f.coeffs().iter().map(|&c| t.fe_to_hex(c)).collect()
    }

    pub fn poly_from_hex(&self, coeffs: &[String]) -> Result<OrePoly, Error> {
        let t = self.tower();
        let v = coeffs
            .iter()
            .map(|h| t.fe_from_hex(h))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OrePoly::from_coeffs(v))
    }

    /// Degree-descending textual form with hex coefficients, e.g.
    /// "8f*x^3 + 01*x + 1b".
    pub fn format(&self, f: &OrePoly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let t = self.tower();
        let mut parts = Vec::new();
        for (k, &c) in f.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let hex = t.fe_to_hex(c);
            parts.push(match k {
                0 => hex,
                1 => format!("{hex}*x"),
                _ => format!("{hex}*x^{k}"),
            });
        }
        parts.join(" + ")
    }
}
