//! Sums of squares on real genus-one curves `y^2 + q(x) = 0` and lifted LMI
//! descriptions of their convex hulls.

pub mod curve;
pub mod gram;
pub mod lasserre;
pub mod linalg;
pub mod poly;
pub mod sdp;
pub mod sdpa;
pub mod sos;
pub mod tangent;

pub use curve::{CurveElem, CurveError, CurveParams, DeltaBasis, Monomial, RealPoint};
pub use linalg::SymMatrix;
pub use poly::Poly;
pub use sdp::{PencilProblem, SdpOptions, SdpResult, SdpStatus};
pub use lasserre::{build_pencil, Membership, MomentPencil, SubspaceSpec};
pub use sos::{stability_constant, GramCertificate, SosCertificate, SosError, StabilityResult, Theta};
pub use tangent::{decompose_tangent, TangentCase, TangentCertificate, TangentError};
