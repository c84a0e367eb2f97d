//! Built-in reference vectors. Two fixed instances are embedded: a complete
//! length-16 code over F_256 with a known key pair, cryptogram, and decoding
//! transcript (appendix-b), and a linearized-polynomial counterexample
//! instance over F_512 (appendix-a). The `verify` module replays them; tests
//! across the crate reuse the raw data.

use std::sync::Arc;

use crate::goppa::{build_code, GoppaCode};
use crate::ore::{OrePoly, OreRing};
use crate::pindep::PointSet;
use crate::tower::{Fe, FieldTower};

/// The length-16 worked example over F_256.
pub mod appendix_b {
    use super::*;

    /// Exponents e with α_i = z^e.
    pub const ALPHA_EXPS: [u64; 16] =
        [45, 159, 68, 233, 110, 77, 27, 200, 37, 210, 201, 168, 151, 127, 251, 192];

    /// The normal and primitive generators behind the point list.
    pub const NORMAL_EXP: u64 = 37;
    pub const PRIMITIVE_EXP: u64 = 41;

    /// (i, j) with α_k = γ^i·β_j inside the maximal independent set.
    pub const POINT_SLOTS: [(usize, usize); 16] = [
        (0, 0), (9, 0), (13, 0), (13, 1), (10, 1), (7, 0), (12, 0), (10, 0),
        (2, 1), (0, 1), (6, 1), (3, 0), (11, 1), (2, 0), (1, 1), (12, 1),
    ];

    /// Parity polynomial coefficient exponents, degree-descending x^3..x^0.
    pub const PARITY_EXPS: [[u64; 4]; 16] = [
        [136, 91, 187, 142],
        [68, 62, 136, 130],
        [102, 170, 204, 17],
        [102, 5, 204, 107],
        [85, 60, 34, 9],
        [238, 195, 204, 161],
        [85, 7, 170, 92],
        [85, 225, 34, 174],
        [170, 252, 187, 14],
        [136, 181, 187, 232],
        [102, 3, 238, 139],
        [136, 19, 136, 19],
        [170, 36, 34, 155],
        [170, 162, 187, 179],
        [51, 242, 221, 157],
        [85, 97, 170, 182],
    ];

    /// Columns 8..15 of the 8×16 public matrix [I | T], as exponents.
    pub const PUBLIC_TAIL_EXPS: [[u64; 8]; 8] = [
        [142, 92, 126, 156, 187, 178, 234, 88],
        [73, 103, 157, 113, 188, 253, 222, 152],
        [109, 109, 64, 165, 131, 204, 138, 145],
        [180, 78, 202, 230, 82, 81, 185, 224],
        [70, 247, 51, 65, 49, 162, 111, 36],
        [119, 236, 50, 243, 136, 56, 133, 225],
        [89, 172, 152, 209, 234, 22, 231, 96],
        [70, 152, 157, 32, 247, 180, 172, 106],
    ];

    /// Cryptogram coordinates, as exponents.
    pub const CRYPTOGRAM_EXPS: [u64; 8] = [133, 103, 109, 78, 247, 236, 172, 152];

    /// Syndrome of the received word, degree-descending x^3..x^0 exponents.
    pub const SYNDROME_EXPS: [u64; 4] = [36, 81, 87, 132];

    /// Key-equation transcript: truncated-run outputs, the stray right root
    /// of v_I, the locator and evaluator, and the error data.
    pub const V_I_EXPS: [u64; 2] = [189, 174];
    pub const R_I_EXP: u64 = 119;
    pub const STRAY_ROOT_EXP: u64 = 240;
    pub const OMEGA_EXPS: [u64; 2] = [155, 200];
    pub const ERROR_POSITIONS: [usize; 2] = [0, 9];
    pub const ERROR_VALUE_EXPS: [u64; 2] = [249, 0];

    pub fn tower() -> FieldTower {
        FieldTower::with_modulus(2, 8, 1, 4, &[1, 0, 1, 1, 1, 0, 0, 0, 1]).unwrap()
    }

    pub fn ring() -> OreRing {
        OreRing::twisted(Arc::new(tower()))
    }

    pub(crate) fn zp(t: &FieldTower, e: u64) -> Fe {
        t.pow(t.z(), e)
    }

    pub fn points(ring: &OreRing) -> PointSet {
        let t = ring.tower();
        PointSet::new(ring, ALPHA_EXPS.iter().map(|&e| zp(t, e)).collect()).unwrap()
    }

    /// g = x^4 + z^238·x^2 + z^68.
    pub fn goppa_poly(ring: &OreRing) -> OrePoly {
        let t = ring.tower();
        OrePoly::from_coeffs(vec![zp(t, 68), Fe::ZERO, zp(t, 238), Fe::ZERO, Fe::ONE])
    }

    /// The full reference code with unit column multipliers.
    pub fn code() -> GoppaCode {
        let ring = ring();
        let points = points(&ring);
        let g = goppa_poly(&ring);
        build_code(ring, points, vec![Fe::ONE; 16], g).unwrap()
    }

    /// Expected parity polynomials, from [`PARITY_EXPS`].
    pub fn parity_polys(ring: &OreRing) -> Vec<OrePoly> {
        let t = ring.tower();
        PARITY_EXPS
            .iter()
            .map(|exps| {
                OrePoly::from_coeffs(vec![
                    zp(t, exps[3]),
                    zp(t, exps[2]),
                    zp(t, exps[1]),
                    zp(t, exps[0]),
                ])
            })
            .collect()
    }

    /// e = z^249·ε_0 + 1·ε_9.
    pub fn error_vector(ring: &OreRing) -> Vec<Fe> {
        let t = ring.tower();
        let mut e = vec![Fe::ZERO; 16];
        e[0] = zp(t, 249);
        e[9] = Fe::ONE;
        e
    }

    /// c = e·H_pubᵀ = (z^133, z^103, z^109, z^78, z^247, z^236, z^172, z^152).
    pub fn cryptogram(ring: &OreRing) -> Vec<Fe> {
        let t = ring.tower();
        CRYPTOGRAM_EXPS.iter().map(|&e| zp(t, e)).collect()
    }

    /// The cryptogram placed on the identity block: a solution y of
    /// c = y·H_pubᵀ.
    pub fn received_word(ring: &OreRing) -> Vec<Fe> {
        let t = ring.tower();
        let mut y = vec![Fe::ZERO; 16];
        for (i, &e) in CRYPTOGRAM_EXPS.iter().enumerate() {
            y[i] = zp(t, e);
        }
        y
    }

    /// s = z^36x^3 + z^81x^2 + z^87x + z^132.
    pub fn syndrome_poly(ring: &OreRing) -> OrePoly {
        let t = ring.tower();
        OrePoly::from_coeffs(vec![
            zp(t, SYNDROME_EXPS[3]),
            zp(t, SYNDROME_EXPS[2]),
            zp(t, SYNDROME_EXPS[1]),
            zp(t, SYNDROME_EXPS[0]),
        ])
    }

    /// The published 8×16 public matrix [I_8 | T].
    pub fn public_matrix(ring: &OreRing) -> crate::linalg::Matrix {
        let t = ring.tower();
        let mut m = crate::linalg::Matrix::zero(8, 16);
        for i in 0..8 {
            m.set(i, i, Fe::ONE);
            for j in 0..8 {
                m.set(i, 8 + j, zp(t, PUBLIC_TAIL_EXPS[i][j]));
            }
        }
        m
    }

    /// λ = x^2 + 1.
    pub fn locator(_ring: &OreRing) -> OrePoly {
        OrePoly::from_coeffs(vec![Fe::ONE, Fe::ZERO, Fe::ONE])
    }

    /// ω = z^155·x + z^200.
    pub fn evaluator(ring: &OreRing) -> OrePoly {
        let t = ring.tower();
        OrePoly::from_coeffs(vec![zp(t, OMEGA_EXPS[1]), zp(t, OMEGA_EXPS[0])])
    }
}

/// The linearized-polynomial counterexample instance over F_512, alphabet
/// F_8, q = 2. Linearized polynomials Σ a_i x^{2^i} are stored through the
/// coefficient-preserving correspondence with the twisted ring, so every
/// polynomial below is an [`OrePoly`] in y = x^2.
pub mod appendix_a {
    use super::*;

    /// F_8 generator b inside F_512: b = c^292, a root of b^3 + b + 1.
    pub const B_EMBED_EXP: u64 = 292;

    /// Evaluation points g_i = c^e, linearly independent over F_2.
    pub const G_EXPS: [u64; 8] = [479, 224, 232, 158, 14, 60, 121, 267];

    /// L = x^{2^5} + c^15·x^{2^4} + c^414·x^{2^3} + c^413·x^{2^2}
    ///   + c^53·x^{2^1} + c^377·x^{2^0}, tail exponents degree-descending.
    pub const L_TAIL_EXPS: [u64; 5] = [15, 414, 413, 53, 377];

    /// Remainders r_i of L under division by x^2 − g_i·x.
    pub const R_EXPS: [u64; 8] = [454, 194, 402, 117, 297, 353, 90, 178];

    /// (x^2 − g_1·x)^{-1} and (x^2 − g_2·x)^{-1}, degree-descending
    /// (q-degrees 4..0). The published display shows "x^384" in the last
    /// coefficient of the first inverse; c^384 is meant and recorded here.
    pub const INV1_EXPS: [u64; 5] = [59, 164, 334, 280, 384];
    pub const INV2_EXPS: [u64; 5] = [296, 336, 410, 505, 189];

    /// e = (b, b^6, 0, …, 0) over F_8, embedded as (c^292, c^219, 0, …, 0).
    pub const ERROR_EXPS: [u64; 2] = [292, 219];

    /// S = Σ_i (x^2 − g_i·x)^{-1} ∘ e_i·x, degree-descending (4..0).
    pub const S_EXPS: [u64; 5] = [226, 165, 378, 149, 436];

    /// σ = Π_{g ∈ ⟨g_1,g_2⟩} (x − g) = x^{2^2} + c^81·x^{2^1} + c^225·x^{2^0}.
    pub const SIGMA_EXPS: [u64; 2] = [81, 225];

    /// ω = c^438·x^{2^1} + c^193·x^{2^0}.
    pub const OMEGA_EXPS: [u64; 2] = [438, 193];

    /// σ ∘ S reduced by L, degree-descending (4..0). Differs from ω.
    pub const PRODUCT_EXPS: [u64; 5] = [507, 76, 32, 301, 450];

    /// The published ordered-product display, degree-descending tail after
    /// the monic head. Its label says (x^2 − g_2·x) ∘ (x^2 − g_1·x), but the
    /// printed coefficients come from the adjacent pair (x^2 − g_3·x) ∘
    /// (x^2 − g_2·x): the constant term of any such product is the plain
    /// product of the two points, and c^456 = g_3·g_2 while g_2·g_1 = c^192.
    /// Either reading differs from σ, which is the point of the display.
    pub const WRONG_PRODUCT_EXPS: [u64; 2] = [346, 456];

    /// F_512 = F_2[c]/(c^9 + c^4 + 1) with alphabet F_8 and σ the square
    /// map: p = 2, d = 3, m = 3, s = 1.
    pub fn tower() -> FieldTower {
        FieldTower::with_modulus(2, 3, 3, 1, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]).unwrap()
    }

    pub fn ring() -> OreRing {
        OreRing::twisted(Arc::new(tower()))
    }

    pub(crate) fn cp(t: &FieldTower, e: u64) -> Fe {
        t.pow(t.z(), e)
    }

    pub fn points(ring: &OreRing) -> Vec<Fe> {
        let t = ring.tower();
        G_EXPS.iter().map(|&e| cp(t, e)).collect()
    }

    pub fn goppa_style_polynomial(ring: &OreRing) -> OrePoly {
        let t = ring.tower();
        let mut coeffs = vec![Fe::ZERO; 6];
        coeffs[5] = Fe::ONE;
        for (k, &e) in L_TAIL_EXPS.iter().enumerate() {
            coeffs[4 - k] = cp(t, e);
        }
        OrePoly::from_coeffs(coeffs)
    }

    pub fn error_vector(ring: &OreRing) -> Vec<Fe> {
        let t = ring.tower();
        let mut e = vec![Fe::ZERO; 8];
        e[0] = cp(t, ERROR_EXPS[0]);
        e[1] = cp(t, ERROR_EXPS[1]);
        e
    }

    fn poly_desc(ring: &OreRing, exps: &[u64]) -> OrePoly {
        let t = ring.tower();
        OrePoly::from_coeffs(exps.iter().rev().map(|&e| cp(t, e)).collect())
    }

    pub fn inverse_1(ring: &OreRing) -> OrePoly {
        poly_desc(ring, &INV1_EXPS)
    }

    pub fn inverse_2(ring: &OreRing) -> OrePoly {
        poly_desc(ring, &INV2_EXPS)
    }

    pub fn syndrome(ring: &OreRing) -> OrePoly {
        poly_desc(ring, &S_EXPS)
    }

    /// Monic of degree 2 with the published tail.
    pub fn locator(ring: &OreRing) -> OrePoly {
        let t = ring.tower();
        OrePoly::from_coeffs(vec![cp(t, SIGMA_EXPS[1]), cp(t, SIGMA_EXPS[0]), Fe::ONE])
    }

    pub fn evaluator(ring: &OreRing) -> OrePoly {
        poly_desc(ring, &OMEGA_EXPS)
    }

    pub fn reduced_product(ring: &OreRing) -> OrePoly {
        poly_desc(ring, &PRODUCT_EXPS)
    }

    /// Monic of degree 2 with the published tail; recomputed from g_3, g_2.
    pub fn ordered_product(ring: &OreRing) -> OrePoly {
        let t = ring.tower();
        OrePoly::from_coeffs(vec![
            cp(t, WRONG_PRODUCT_EXPS[1]),
            cp(t, WRONG_PRODUCT_EXPS[0]),
            Fe::ONE,
        ])
    }

    pub fn remainders(ring: &OreRing) -> Vec<Fe> {
        let t = ring.tower();
        R_EXPS.iter().map(|&e| cp(t, e)).collect()
    }
}

/// The published admissibility tables for the parameter search.
pub mod param_tables {
    /// Every admissible (m, delta) pair for n = 4096, t = 25, q = 2.
    pub const N4096_T25: [(u32, u32); 12] = [
        (24, 12),
        (26, 13),
        (28, 14),
        (30, 15),
        (32, 16),
        (33, 11),
        (34, 17),
        (36, 12),
        (36, 18),
        (38, 19),
        (39, 13),
        (40, 20),
    ];

    /// Shape of the n = 2560, t = 22, q = 2^4 table. The table lists 65
    /// pairs with m running 12..=29; the m = 12 row opens at delta = 12,
    /// the m = 29 row closes at delta = 58, and delta dips to 8 in between.
    pub const N2560_T22_COUNT: usize = 65;
    pub const N2560_T22_M_RANGE: (u32, u32) = (12, 29);
    pub const N2560_T22_FIRST_DELTA: u32 = 12;
    pub const N2560_T22_LAST_DELTA: u32 = 58;
    pub const N2560_T22_MIN_DELTA: u32 = 8;
}
