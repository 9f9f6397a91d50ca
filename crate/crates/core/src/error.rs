use thiserror::Error;

use crate::{baire, finite, lspace, ordinal, seq, verify, walks};

/// Any error raised by the library, tagged with the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("finite-osc: {0}")]
    Finite(#[from] finite::FiniteError),
    #[error("baire-osc: {0}")]
    Baire(#[from] baire::BaireError),
    #[error("seq-osc: {0}")]
    Seq(#[from] seq::SeqError),
    #[error("ordinal: {0}")]
    Ordinal(#[from] ordinal::OrdinalError),
    #[error("walks: {0}")]
    Walk(#[from] walks::WalkError),
    #[error("lspace: {0}")]
    Lspace(#[from] lspace::LspaceError),
    #[error("verify: {0}")]
    Verify(#[from] verify::VerifyError),
}
