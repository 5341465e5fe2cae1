//! Per-node detection and cooperation procedures.
//!
//! Everything here is a pure function over explicit inputs (ledgers,
//! archives, timestamps); [`crate::sim`] wires them to the event loop.

pub mod allegation;
pub mod collusion;
pub mod delay;
pub mod forward;
pub mod gamma;
pub mod link_break;
pub mod message;
pub mod rreq;

pub use allegation::{
    check_proof, process_allegation, AllegationKind, AllegationOutcome, AllegationPacket,
    DelayProof, HelloProof, Proof, ProofContext,
};
pub use collusion::{handle_collusion_request, CollusionResponse};
pub use delay::{classify_delay, DelayRule, DelayVerdict, ForwardEvidence};
pub use forward::{witness_eligible, ForwardState, ForwardStatus, TimeoutAction};
pub use gamma::{apply_alt_path_outcome, compute_gamma, AltPathOutcome, PathRecord};
pub use link_break::{
    analyze_hello_replies, estimated_hellos, expected_hellos, BlacklistRule, HelloReply,
    InvestigationFindings,
};
pub use message::{Message, MessageCode, NodeIdentity};
pub use rreq::{RreqLimiter, RreqStamp, RreqVerdict};
