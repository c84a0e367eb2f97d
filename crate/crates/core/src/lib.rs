pub mod decoder;
pub mod error;
mod fp;
pub mod goppa;
pub mod kem;
pub mod linalg;
pub mod linearized;
pub mod ore;
mod par;
pub mod pindep;
pub mod sim;
pub mod tower;
pub mod verify;
pub mod vectors;

pub use decoder::{decode, failure_certificate, DecodeState, DecodeTrace, ErrorVector};
pub use error::Error;
pub use goppa::{build_code, make_goppa_poly, CodeSpec, GoppaCode, SyndromePoly};
pub use kem::{
    decap, encap, hash_error, keygen, search_parameters, Cryptogram, Params, PublicKey,
    SharedSecret,
};
pub use linearized::{
    lin_compose, lin_to_ore, ore_to_lin, wang_counterexample, LinearizedPoly, WangCheck,
    WangReport,
};
pub use ore::{EuclideanRow, EuclideanTable, OrePoly, OreRing, Side};
pub use pindep::PointSet;
pub use sim::{failure_rate, known_key_pair, run_failure_trials, run_failure_trials_seq, TrialRecord};
pub use tower::{Fe, FieldTower, TowerSpec};
pub use verify::{CheckLine, VerifyReport};
