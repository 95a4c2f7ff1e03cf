use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tile `{0}`: expected four comma-separated colours")]
    TileSyntax(String),
    #[error("invalid tile system `{0}`: expected one or two tiles separated by `;`")]
    SystemSyntax(String),
    #[error("invalid interaction mode `{0}`: expected `sym`, `asym` or `matrix:<path>`")]
    ModeSyntax(String),
    #[error("colour {colour} is outside the binding matrix (max colour {max})")]
    ColourOutOfRange { colour: u8, max: u8 },
    #[error("binding matrix is malformed: {0}")]
    BindingMatrix(String),
    #[error("concentration f = {0} is outside [0, 1]")]
    Concentration(f64),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("structure extent {extent} is smaller than the required {min}")]
    StructureTooSmall { extent: u32, min: u32 },
    #[error("predictor does not apply to this tile set")]
    NotApplicable,
    #[error("predictor failure: {0}")]
    Predictor(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
