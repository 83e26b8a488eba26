//! Image containers and file codecs.
//!
//! Decodes Radiance RGBE and PFM into linear-light rasters and encodes
//! fused results as 8-bit PNG or binary PPM.

mod pfm;
mod ppm;
mod rgbe;

pub use pfm::{read_pfm, write_pfm, PfmDecode};
pub use ppm::read_ppm;
pub use rgbe::read_radiance_hdr;

use crate::error::{Error, Result};

/// Linear-light RGB raster with non-negative samples, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HdrImage {
    width: u32,
    height: u32,
    data: Vec<f32>,
}

impl HdrImage {
    /// `data` is interleaved RGB, length `width * height * 3`, every sample
    /// finite and non-negative.
    pub fn new(width: u32, height: u32, data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero dimension {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(Error::InvalidImage(format!(
                "data length {} != {}x{}x3 = {expected}",
                data.len(),
                width,
                height
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidImage(format!(
                "sample {i} is {} (must be finite and >= 0)",
                data[i]
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Interleaved RGB samples.
    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn pixel(&self, index: usize) -> [f32; 3] {
        let i = index * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

/// Display-referred RGB raster with samples in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LdrImage {
    width: u32,
    height: u32,
    data: Vec<f32>,
}

impl LdrImage {
    pub fn new(width: u32, height: u32, data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero dimension {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(Error::InvalidImage(format!(
                "data length {} != {}x{}x3 = {expected}",
                data.len(),
                width,
                height
            )));
        }
        if let Some(i) = data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidImage(format!(
                "sample {i} is {} (must be in [0, 1])",
                data[i]
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn pixel(&self, index: usize) -> [f32; 3] {
        let i = index * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// 8-bit quantization of every sample, `round(v * 255)` half away from zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().map(|&v| quantize8(v)).collect()
    }
}

/// `round(v * 255)` with v clamped to `[0, 1]`; half rounds away from zero.
pub fn quantize8(v: f32) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Output containers for [`write_ldr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdrFormat {
    /// 8-bit/channel truecolor PNG.
    Png8,
    /// Binary `P6` PPM, maxval 255.
    Ppm,
}

/// Encodes an LDR image into the requested container.
pub fn write_ldr(image: &LdrImage, format: LdrFormat) -> Result<Vec<u8>> {
    match format {
        LdrFormat::Ppm => Ok(ppm::write_ppm(image)),
        LdrFormat::Png8 => {
            use image::ImageEncoder;
            let mut out = Vec::new();
            let encoder = image::codecs::png::PngEncoder::new(&mut out);
            encoder
                .write_image(
                    &image.to_bytes(),
                    image.width,
                    image.height,
                    image::ExtendedColorType::Rgb8,
                )
                .map_err(|e| Error::PngEncode(e.to_string()))?;
            Ok(out)
        }
    }
}

/// Decoded HDR input plus codec-side bookkeeping.
#[derive(Debug, Clone)]
pub struct HdrDecode {
    pub image: HdrImage,
    /// Negative samples clamped to zero during decode (PFM only).
    pub clamped_negatives: usize,
}

/// Decodes an HDR container by sniffing its magic bytes.
pub fn read_hdr(bytes: &[u8]) -> Result<HdrDecode> {
    if bytes.starts_with(b"#?") {
        Ok(HdrDecode {
            image: read_radiance_hdr(bytes)?,
            clamped_negatives: 0,
        })
    } else if bytes.starts_with(b"PF") || bytes.starts_with(b"Pf") {
        let PfmDecode {
            image,
            clamped_negatives,
        } = read_pfm(bytes)?;
        Ok(HdrDecode {
            image,
            clamped_negatives,
        })
    } else {
        Err(Error::InvalidImage(
            "unrecognized input container (expected Radiance RGBE or PFM)".into(),
        ))
    }
}
