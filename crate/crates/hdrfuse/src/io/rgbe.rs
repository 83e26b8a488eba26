//! Radiance RGBE decoder.
//!
//! Handles the `#?RADIANCE` / `#?RGBE` header, `-Y V +X U` resolution lines,
//! and both flat and new-style (adaptive RLE) pixel payloads. Parse errors
//! carry the byte offset where decoding stopped.

use super::HdrImage;
use crate::error::{Error, Result};

/// Decodes a Radiance RGBE byte stream into a linear-light image.
pub fn read_radiance_hdr(bytes: &[u8]) -> Result<HdrImage> {
    let mut cur = Cursor { bytes, pos: 0 };

    let magic = cur.read_line().ok_or(Error::RgbeBadMagic)?;
    if magic != b"#?RADIANCE" && magic != b"#?RGBE" {
        return Err(Error::RgbeBadMagic);
    }

    // Header lines up to the resolution line.
    let (width, height) = loop {
        let line_start = cur.pos;
        let line = cur.read_line().ok_or(Error::RgbeBadHeader {
            offset: line_start,
        })?;
        if line.is_empty() || line.starts_with(b"#") {
            continue;
        }
        if line.starts_with(b"-") || line.starts_with(b"+") {
            break parse_resolution(line, line_start)?;
        }
        let text = std::str::from_utf8(line).map_err(|_| Error::RgbeBadHeader {
            offset: line_start,
        })?;
        match text.split_once('=') {
            Some((key, value)) => {
                if key.trim() == "FORMAT" && value.trim() != "32-bit_rle_rgbe" {
                    return Err(Error::RgbeBadFormat {
                        format: value.trim().to_string(),
                        offset: line_start,
                    });
                }
                // EXPOSURE, GAMMA etc. do not affect the decoded radiance here.
            }
            None => {
                return Err(Error::RgbeBadHeader {
                    offset: line_start,
                })
            }
        }
    };

    let w = width as usize;
    let h = height as usize;
    let mut data = Vec::with_capacity(w * h * 3);
    let mut scanline = vec![0u8; w * 4];

    for row in 0..h {
        read_scanline(&mut cur, row, w, &mut scanline)?;
        for px in scanline.chunks_exact(4) {
            let [r, g, b] = decode_rgbe([px[0], px[1], px[2], px[3]]);
            data.extend_from_slice(&[r, g, b]);
        }
    }

    HdrImage::new(width, height, data)
}

/// Decodes one RGBE quadruple to linear RGB: `c = m/256 * 2^(e-128)`,
/// with exponent byte 0 meaning black.
pub fn decode_rgbe(q: [u8; 4]) -> [f32; 3] {
    let e = q[3];
    if e == 0 {
        return [0.0, 0.0, 0.0];
    }
    // m/256 * 2^(e-128) = m * 2^(e-136); exact in f64, fits in f32.
    let scale = (e as i32 - 136) as f64;
    let c = |m: u8| (m as f64 * scale.exp2()) as f32;
    [c(q[0]), c(q[1]), c(q[2])]
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Next `\n`-terminated line without the terminator; `None` at EOF.
    fn read_line(&mut self) -> Option<&'a [u8]> {
        if self.pos >= self.bytes.len() {
            return None;
        }
        let rest = &self.bytes[self.pos..];
        match rest.iter().position(|&b| b == b'\n') {
            Some(i) => {
                self.pos += i + 1;
                Some(&rest[..i])
            }
            None => {
                self.pos = self.bytes.len();
                Some(rest)
            }
        }
    }

    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return None;
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Some(out)
    }
}

fn parse_resolution(line: &[u8], offset: usize) -> Result<(u32, u32)> {
    let bad = || Error::RgbeBadOrientation {
        line: String::from_utf8_lossy(line).into_owned(),
        offset,
    };
    let text = std::str::from_utf8(line).map_err(|_| bad())?;
    let parts: Vec<&str> = text.split_whitespace().collect();
    // Only the standard top-down, left-to-right orientation is supported.
    if parts.len() != 4 || parts[0] != "-Y" || parts[2] != "+X" {
        return Err(bad());
    }
    let height: u32 = parts[1].parse().map_err(|_| bad())?;
    let width: u32 = parts[3].parse().map_err(|_| bad())?;
    if width == 0 || height == 0 {
        return Err(bad());
    }
    Ok((width, height))
}

fn read_scanline(cur: &mut Cursor, row: usize, width: usize, out: &mut [u8]) -> Result<()> {
    let start = cur.pos;
    let head = cur.take(4).ok_or(Error::RgbeTruncated { row, offset: start })?;
    let head = [head[0], head[1], head[2], head[3]];

    // New-style RLE marker: (2, 2, len_hi, len_lo) with len_hi's top bit clear.
    if head[0] == 2 && head[1] == 2 && head[2] & 0x80 == 0 {
        let encoded = ((head[2] as usize) << 8) | head[3] as usize;
        if encoded != width {
            return Err(Error::RgbeRleMismatch { row, offset: start });
        }
        decode_rle_components(cur, row, width, out)
    } else {
        out[..4].copy_from_slice(&head);
        let rest_at = cur.pos;
        let rest = cur
            .take(width * 4 - 4)
            .ok_or(Error::RgbeTruncated { row, offset: rest_at })?;
        out[4..].copy_from_slice(rest);
        Ok(())
    }
}

/// RLE payload stores the four components of a scanline as separate planes.
fn decode_rle_components(cur: &mut Cursor, row: usize, width: usize, out: &mut [u8]) -> Result<()> {
    let mut plane = vec![0u8; width];
    for c in 0..4 {
        let mut filled = 0usize;
        while filled < width {
            let at = cur.pos;
            let count = cur.take(1).ok_or(Error::RgbeTruncated { row, offset: at })?[0];
            if count > 128 {
                let run = count as usize - 128;
                if filled + run > width {
                    return Err(Error::RgbeRleMismatch { row, offset: at });
                }
                let at = cur.pos;
                let value = cur.take(1).ok_or(Error::RgbeTruncated { row, offset: at })?[0];
                plane[filled..filled + run].fill(value);
                filled += run;
            } else {
                let run = count as usize;
                if run == 0 || filled + run > width {
                    return Err(Error::RgbeRleMismatch { row, offset: at });
                }
                let at = cur.pos;
                let lit = cur
                    .take(run)
                    .ok_or(Error::RgbeTruncated { row, offset: at })?;
                plane[filled..filled + run].copy_from_slice(lit);
                filled += run;
            }
        }
        for (x, &v) in plane.iter().enumerate() {
            out[x * 4 + c] = v;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_file(width: u32, height: u32, pixels: &[[u8; 4]]) -> Vec<u8> {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"#?RADIANCE\n");
        bytes.extend_from_slice(b"FORMAT=32-bit_rle_rgbe\n");
        bytes.extend_from_slice(b"\n");
        bytes.extend_from_slice(format!("-Y {height} +X {width}\n").as_bytes());
        for p in pixels {
            bytes.extend_from_slice(p);
        }
        bytes
    }

    #[test]
    fn decode_quadruple_examples() {
        assert_eq!(decode_rgbe([0, 0, 0, 0]), [0.0, 0.0, 0.0]);
        // 128/256 * 2^1
        assert_eq!(decode_rgbe([128, 0, 0, 129]), [1.0, 0.0, 0.0]);
        // 255/256 * 2^0
        let v = decode_rgbe([255, 255, 255, 128]);
        assert_eq!(v, [0.99609375, 0.99609375, 0.99609375]);
    }

    #[test]
    fn decode_monotone_in_exponent() {
        for m in [1u8, 7, 128, 255] {
            let mut prev = 0.0f32;
            for e in 1..=255u8 {
                let v = decode_rgbe([m, 0, 0, e])[0];
                assert!(v > prev, "m={m} e={e}: {v} !> {prev}");
                prev = v;
            }
        }
    }

    #[test]
    fn flat_payload_roundtrip() {
        let file = flat_file(2, 1, &[[128, 0, 0, 129], [0, 0, 0, 0]]);
        let img = read_radiance_hdr(&file).unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
        assert_eq!(img.pixel(0), [1.0, 0.0, 0.0]);
        assert_eq!(img.pixel(1), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn rgbe_magic_variant_accepted() {
        let mut file = flat_file(1, 1, &[[128, 0, 0, 129]]);
        file.splice(0..10, b"#?RGBE".iter().copied());
        assert!(read_radiance_hdr(&file).is_ok());
    }

    #[test]
    fn bad_magic_rejected() {
        assert!(matches!(
            read_radiance_hdr(b"P6\n1 1\n255\n"),
            Err(Error::RgbeBadMagic)
        ));
    }

    #[test]
    fn unsupported_orientation_rejected() {
        let file = b"#?RADIANCE\n\n+Y 1 +X 1\n\x80\x00\x00\x81".to_vec();
        match read_radiance_hdr(&file) {
            Err(Error::RgbeBadOrientation { line, offset }) => {
                assert_eq!(line, "+Y 1 +X 1");
                assert_eq!(offset, 12);
            }
            other => panic!("expected orientation error, got {other:?}"),
        }
    }

    #[test]
    fn bad_format_rejected() {
        let file = b"#?RADIANCE\nFORMAT=32-bit_rle_xyze\n\n-Y 1 +X 1\n\x00\x00\x00\x00".to_vec();
        assert!(matches!(
            read_radiance_hdr(&file),
            Err(Error::RgbeBadFormat { .. })
        ));
    }

    #[test]
    fn truncated_flat_payload_names_offset() {
        let mut file = flat_file(2, 2, &[[128, 0, 0, 129]; 4]);
        file.truncate(file.len() - 9);
        match read_radiance_hdr(&file) {
            Err(Error::RgbeTruncated { row, .. }) => assert_eq!(row, 1),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn rle_scanline_decodes() {
        // 8-pixel scanline; all four planes as one 8-byte run each.
        let width = 8u32;
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"#?RADIANCE\n\n-Y 1 +X 8\n");
        bytes.extend_from_slice(&[2, 2, 0, 8]);
        for value in [128u8, 64, 32, 129] {
            bytes.extend_from_slice(&[128 + 8, value]);
        }
        let img = read_radiance_hdr(&bytes).unwrap();
        assert_eq!(img.width(), width);
        for i in 0..8 {
            assert_eq!(img.pixel(i), [1.0, 0.5, 0.25]);
        }
    }

    #[test]
    fn rle_mixed_runs_and_literals() {
        // Plane = 3 literals + run of 5.
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"#?RADIANCE\n\n-Y 1 +X 8\n");
        bytes.extend_from_slice(&[2, 2, 0, 8]);
        for base in [10u8, 20, 30, 130] {
            bytes.push(3);
            bytes.extend_from_slice(&[base, base + 1, base + 2]);
            bytes.extend_from_slice(&[128 + 5, base]);
        }
        let img = read_radiance_hdr(&bytes).unwrap();
        let expect = decode_rgbe([11, 21, 31, 131]);
        assert_eq!(img.pixel(1), expect);
        assert_eq!(img.pixel(5), decode_rgbe([10, 20, 30, 130]));
    }

    #[test]
    fn rle_width_mismatch_names_offset() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"#?RADIANCE\n\n-Y 1 +X 8\n");
        let marker_at = bytes.len();
        bytes.extend_from_slice(&[2, 2, 0, 9]);
        match read_radiance_hdr(&bytes) {
            Err(Error::RgbeRleMismatch { row, offset }) => {
                assert_eq!(row, 0);
                assert_eq!(offset, marker_at);
            }
            other => panic!("expected RLE mismatch, got {other:?}"),
        }
    }

    #[test]
    fn rle_overrun_rejected() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"#?RADIANCE\n\n-Y 1 +X 8\n");
        bytes.extend_from_slice(&[2, 2, 0, 8]);
        bytes.extend_from_slice(&[128 + 9, 1]); // run of 9 into an 8-wide plane
        assert!(matches!(
            read_radiance_hdr(&bytes),
            Err(Error::RgbeRleMismatch { .. })
        ));
    }

    #[test]
    fn rle_truncated_plane_rejected() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"#?RADIANCE\n\n-Y 1 +X 8\n");
        bytes.extend_from_slice(&[2, 2, 0, 8]);
        bytes.extend_from_slice(&[128 + 8, 1, 128 + 8]); // second plane loses its value byte
        assert!(matches!(
            read_radiance_hdr(&bytes),
            Err(Error::RgbeTruncated { .. })
        ));
    }
}
