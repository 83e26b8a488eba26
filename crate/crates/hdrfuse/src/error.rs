//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rgbe: bad magic at byte 0 (expected `#?RADIANCE` or `#?RGBE`)")]
    RgbeBadMagic,

    #[error("rgbe: malformed header line at byte {offset}")]
    RgbeBadHeader { offset: usize },

    #[error("rgbe: unsupported pixel format `{format}` at byte {offset}")]
    RgbeBadFormat { format: String, offset: usize },

    #[error("rgbe: unsupported resolution orientation `{line}` at byte {offset} (only `-Y V +X U`)")]
    RgbeBadOrientation { line: String, offset: usize },

    #[error("rgbe: truncated scanline for row {row} at byte {offset}")]
    RgbeTruncated { row: usize, offset: usize },

    #[error("rgbe: RLE length mismatch in row {row} at byte {offset}")]
    RgbeRleMismatch { row: usize, offset: usize },

    #[error("pfm: grayscale `Pf` images are not supported")]
    PfmGrayscale,

    #[error("pfm: malformed header at byte {offset}: {reason}")]
    PfmBadHeader { reason: String, offset: usize },

    #[error("pfm: truncated payload (expected {expected} bytes, found {found})")]
    PfmTruncated { expected: usize, found: usize },

    #[error("pfm: NaN sample at pixel {pixel}")]
    PfmNan { pixel: usize },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty region")]
    EmptyRegion,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gmm: {0}")]
    Gmm(String),

    #[error("pyramid levels {requested} out of range [1, {max}] for {width}x{height}")]
    LevelsOutOfRange {
        requested: usize,
        max: usize,
        width: u32,
        height: u32,
    },

    #[error("png encoding failed: {0}")]
    PngEncode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
