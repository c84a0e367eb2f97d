//! Syndrome decoding through the non-commutative key equation.
//!
//! A truncated extended Euclidean pass on the Goppa polynomial and the
//! syndrome yields a locator candidate whose right roots among the
//! positional points mark error positions. The candidate may locate fewer
//! positions than its degree; in that case the full locator is rebuilt by
//! adjoining the missed roots, each found by scanning for the first point
//! that stalls the degree of an accumulated least common left multiple.
//! Error values come from an exact linear system over the prime field.

use crate::error::Error;
use crate::fp::FpMat;
use crate::goppa::{GoppaCode, SyndromePoly};
use crate::linalg::Matrix;
use crate::ore::{OrePoly, OreRing};
use crate::tower::Fe;

/// Error pattern over the alphabet subfield F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorVector {
    values: Vec<Fe>,
}

impl ErrorVector {
    pub fn new(values: Vec<Fe>) -> ErrorVector {
        ErrorVector { values }
    }

    pub fn zero(n: usize) -> ErrorVector {
        ErrorVector { values: vec![Fe::ZERO; n] }
    }

    pub fn values(&self) -> &[Fe] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Fe> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.values.iter().filter(|c| !c.is_zero()).count()
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.values[i].is_zero()).collect()
    }
}

/// Working state of a decode in progress.
///
/// Invariants: `pos` and `other` are disjoint, sorted subsets of 0..n;
/// every index in `pos` has its positional point as a right root of
/// `v_curr`, and no index in `other` does.
#[derive(Clone, Debug)]
pub struct DecodeState {
    pub v_curr: OrePoly,
    pub r_curr: OrePoly,
    pub pos: Vec<usize>,
    pub other: Vec<usize>,
}

impl DecodeState {
    pub fn new(v_curr: OrePoly, r_curr: OrePoly, pos: Vec<usize>, other: Vec<usize>) -> DecodeState {
        DecodeState { v_curr, r_curr, pos, other }
    }

    /// True when the locator candidate has more degree than located roots,
    /// so it cannot be the full locator.
    pub fn has_failure(&self) -> bool {
        self.v_curr.deg().unwrap_or(0) > self.pos.len()
    }
}

/// Record of the route one decode took.
#[derive(Clone, Debug)]
pub struct DecodeTrace {
    /// Truncated-Euclidean locator and evaluator candidates; None when the
    /// syndrome was zero and no Euclidean pass ran.
    pub key_equation: Option<(OrePoly, OrePoly)>,
    /// True when the candidate missed roots and resolution was needed.
    pub failure: bool,
    /// Positions recovered by degree-stall scans, in discovery order.
    pub recovered: Vec<usize>,
}

/// x - root.
fn linear(ring: &OreRing, root: Fe) -> OrePoly {
    OrePoly::from_coeffs(vec![ring.tower().neg(root), Fe::ONE])
}

/// Runs the extended Euclidean algorithm on (g, s), stopping at the first
/// remainder of degree below t. Returns that row's (v, r): the locator and
/// evaluator are always a common left multiple of this pair.
pub fn solve_key_equation(code: &GoppaCode, s: &SyndromePoly) -> (OrePoly, OrePoly) {
    assert!(!s.is_zero(), "zero syndrome decodes to the zero error");
    let table = code.ring().leea(code.goppa_poly(), s.poly(), Some(code.t()));
    let row = table.final_row();
    (row.v.clone(), row.r.clone())
}

/// Splits 0..n into indices whose positional point is a right root of v and
/// the rest. A decode fails exactly when deg v exceeds the root count.
pub fn find_positions(code: &GoppaCode, v: &OrePoly) -> (Vec<usize>, Vec<usize>) {
    debug_assert!(!v.is_zero());
    let ring = code.ring();
    let (mut pos, mut other) = (Vec::new(), Vec::new());
    for (i, &a) in code.points().points().iter().enumerate() {
        if ring.eval_right(v, a).is_zero() {
            pos.push(i);
        } else {
            other.push(i);
        }
    }
    (pos, other)
}

/// Completes a failed locator candidate until its degree matches the number
/// of located positions. Returns the state holding the monic locator and
/// the matching evaluator.
pub fn resolve_failure(code: &GoppaCode, state: DecodeState) -> Result<DecodeState, Error> {
    resolve_failure_traced(code, state, &mut Vec::new())
}

pub(crate) fn resolve_failure_traced(
    code: &GoppaCode,
    mut state: DecodeState,
    recovered: &mut Vec<usize>,
) -> Result<DecodeState, Error> {
    let ring = code.ring();
    let t = ring.tower();
    let points = code.points();
    while state.has_failure() {
        // Adjoin x - α_i for i in `other`, ascending, onto an accumulated
        // least common left multiple. Each non-root raises the degree by
        // one; the first stall is a right root of the true locator.
        let mut f = state.v_curr.clone();
        let mut stall = None;
        for &i in &state.other {
            let e = ring.eval_right(&f, points[i]);
            if e.is_zero() {
                stall = Some(i);
                break;
            }
            f = ring.mul(&linear(ring, ring.conjugate(points[i], e)), &f);
        }
        let Some(i) = stall else {
            return Err(Error::Undecodable(
                "locator incomplete but no positional point stalls it".into(),
            ));
        };
        recovered.push(i);
        // v_curr <- lclm(v_curr, x - α_i) and r_curr gets the same left
        // factor, with both rescaled so the locator stays monic.
        let e = ring.eval_right(&state.v_curr, points[i]);
        let lin = linear(ring, ring.conjugate(points[i], e));
        let v_new = ring.mul(&lin, &state.v_curr);
        let unit = t.inv(v_new.lead());
        state.v_curr = ring.scale_left(unit, &v_new);
        state.r_curr = ring.scale_left(unit, &ring.mul(&lin, &state.r_curr));
        // The update may reveal further roots; rescan everything.
        let (pos, other) = find_positions(code, &state.v_curr);
        state.pos = pos;
        state.other = other;
    }
    Ok(state)
}

/// Solves r = Σ_{j in pos} ρ_j η_j e_j for the error values, where ρ_j is
/// the left quotient of the locator by x - α_j. The system is expanded to
/// prime-field coordinates, one block per polynomial coefficient, since the
/// unknowns live in F but the automorphism twists them out of it.
pub fn solve_values(
    code: &GoppaCode,
    pos: &[usize],
    locator: &OrePoly,
    evaluator: &OrePoly,
) -> Result<Vec<(usize, Fe)>, Error> {
    let ring = code.ring();
    let t = ring.tower();
    let nu = pos.len();
    assert_eq!(locator.deg(), Some(nu), "locator degree must match the located positions");
    if !evaluator.is_zero() && evaluator.deg() >= Some(nu) {
        return Err(Error::Undecodable("evaluator degree reaches the locator degree".into()));
    }
    let dm = t.ext_degree() as usize;
    let d = t.d() as usize;
    let fb = t.f_basis().to_vec();
    let mut mat = FpMat::zero(nu * dm, nu * d, t.p());
    let mut rhs = vec![0u64; nu * dm];
    for l in 0..nu {
        for (i, digit) in t.unpack(evaluator.coeff(l).raw()).into_iter().enumerate() {
            rhs[l * dm + i] = digit;
        }
    }
    for (j, &k) in pos.iter().enumerate() {
        let (rho, rem) = ring.l_divmod(locator, &linear(ring, code.points()[k])).unwrap();
        assert!(rem.is_zero(), "every located point must be a right root of the locator");
        let scaled = ring.times_const(&rho, code.etas()[k]);
        for (b, &beta) in fb.iter().enumerate() {
            let column = ring.times_const(&scaled, beta);
            for l in 0..nu {
                for (i, digit) in t.unpack(column.coeff(l).raw()).into_iter().enumerate() {
                    mat.set(l * dm + i, j * d + b, digit);
                }
            }
        }
    }
    let Some((x, unique)) = mat.solve(&rhs) else {
        return Err(Error::Undecodable("inconsistent error-value system".into()));
    };
    if !unique {
        return Err(Error::Undecodable("underdetermined error-value system".into()));
    }
    let mut out = Vec::with_capacity(nu);
    for (j, &k) in pos.iter().enumerate() {
        let mut v = Fe::ZERO;
        for (b, &beta) in fb.iter().enumerate() {
            let c = x[j * d + b];
            if c != 0 {
                v = t.add(v, t.mul(t.scalar(c), beta));
            }
        }
        if v.is_zero() {
            return Err(Error::Undecodable("located position with zero error value".into()));
        }
        out.push((k, v));
    }
    Ok(out)
}

/// Full decode: returns the unique error of weight at most t explaining y,
/// or Undecodable when none exists.
pub fn decode(code: &GoppaCode, y: &[Fe]) -> Result<ErrorVector, Error> {
    decode_with_trace(code, y).map(|(e, _)| e)
}

/// decode, also reporting which path the decode took.
pub fn decode_with_trace(code: &GoppaCode, y: &[Fe]) -> Result<(ErrorVector, DecodeTrace), Error> {
    let s = code.syndrome(y)?;
    if s.is_zero() {
        let trace = DecodeTrace { key_equation: None, failure: false, recovered: Vec::new() };
        return Ok((ErrorVector::zero(code.n()), trace));
    }
    let (v_i, r_i) = solve_key_equation(code, &s);
    let (pos, other) = find_positions(code, &v_i);
    let mut state = DecodeState::new(v_i.clone(), r_i.clone(), pos, other);
    let failure = state.has_failure();
    let mut recovered = Vec::new();
    if failure {
        state = resolve_failure_traced(code, state, &mut recovered)?;
    }
    let values = solve_values(code, &state.pos, &state.v_curr, &state.r_curr)?;
    let mut e = vec![Fe::ZERO; code.n()];
    for &(k, v) in &values {
        e[k] = v;
    }
    let e = ErrorVector::new(e);
    if e.weight() > code.t() {
        return Err(Error::Undecodable("recovered error exceeds the correction capability".into()));
    }
    if code.syndrome(e.values())?.poly() != s.poly() {
        return Err(Error::Undecodable("recovered error does not explain the syndrome".into()));
    }
    let trace = DecodeTrace { key_equation: Some((v_i, r_i)), failure, recovered };
    Ok((e, trace))
}

/// Predicts from an error pattern alone whether the Euclidean pass locates
/// every position: true exactly when the ν×ν matrix with entry (i, j) equal
/// to N_{-i}(α_{k_j})·σ^{-i}(η_{k_j})·σ^{-i}(e_j) is nonsingular over L,
/// which is equivalent to the locator and evaluator being left coprime.
pub fn failure_certificate(code: &GoppaCode, e: &ErrorVector) -> Result<bool, Error> {
    if e.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: e.len() });
    }
    let support = e.support();
    let nu = support.len();
    if nu == 0 {
        return Err(Error::ZeroInput);
    }
    let t = code.tower();
    let rows = (0..nu)
        .map(|i| {
            let i = i as i64;
            support
                .iter()
                .map(|&k| {
                    let a = t.partial_norm(code.points()[k], -i);
                    let b = t.sigma_pow(code.etas()[k], -i);
                    let c = t.sigma_pow(e.values()[k], -i);
                    t.mul(t.mul(a, b), c)
                })
                .collect()
        })
        .collect();
    Ok(Matrix::from_rows(rows)?.rank(t) == nu)
}
