//! PNG input/output for encoded images: 8-bit RGB, no alpha, no interlace.

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use chromatrace_core::render::EncodedImage;

use crate::error::{Error, Result};

/// Write the image atomically: encode into a temp file in the target
/// directory, then rename over `path`.
pub fn write_png(image: &EncodedImage, path: &Path) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| Error::io(&parent, e))?;
    let tmp = tempfile::Builder::new()
        .prefix(".tmp-png-")
        .tempfile_in(&parent)
        .map_err(|e| Error::io(path, e))?;
    {
        let mut writer = BufWriter::new(tmp.as_file());
        let mut encoder = png::Encoder::new(
            &mut writer,
            image.width() as u32,
            image.height() as u32,
        );
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut png_writer = encoder
            .write_header()
            .map_err(|e| Error::PngEncode { path: path.to_path_buf(), source: e })?;
        png_writer
            .write_image_data(image.as_bytes())
            .map_err(|e| Error::PngEncode { path: path.to_path_buf(), source: e })?;
        png_writer
            .finish()
            .map_err(|e| Error::PngEncode { path: path.to_path_buf(), source: e })?;
        writer.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path)
        .map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Read an 8-bit RGB PNG back into an [`EncodedImage`]. Other color types
/// or depths are rejected.
pub fn read_png(path: &Path) -> Result<EncodedImage> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let decoder = png::Decoder::new(BufReader::new(file));
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::PngDecode { path: path.to_path_buf(), source: e })?;
    let buf_size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::format(path, "image dimensions overflow"))?;
    let mut buf = vec![0u8; buf_size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::PngDecode { path: path.to_path_buf(), source: e })?;
    if info.color_type != png::ColorType::Rgb || info.bit_depth != png::BitDepth::Eight {
        return Err(Error::format(
            path,
            format!(
                "expected 8-bit RGB, found {:?} at {:?}",
                info.color_type, info.bit_depth
            ),
        ));
    }
    buf.truncate(info.buffer_size());
    EncodedImage::from_raw(info.width as usize, info.height as usize, buf)
        .map_err(|e| Error::format(path, e.to_string()))
}
