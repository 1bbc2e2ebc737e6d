//! On-disk bit formats.
//!
//! `ascii` is one `'0'`/`'1'` character per bit with whitespace ignored on
//! input, as read by NIST STS. `bin` packs eight bits per byte with the first
//! generated bit in the most significant bit of byte 0; a partial last byte is
//! zero-padded, so decoding yields a multiple of eight bits.

use std::fs;
use std::io::Write;
use std::path::Path;

use bitchaos::BitStream;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BitFormat {
    #[default]
    Ascii,
    Bin,
}

pub fn encode(bits: &BitStream, format: BitFormat) -> Vec<u8> {
    match format {
        BitFormat::Ascii => bits.iter().map(|b| if b { b'1' } else { b'0' }).collect(),
        BitFormat::Bin => bits.to_bytes(),
    }
}

/// Decodes `bytes`; on failure returns the byte offset and a reason.
pub fn decode(bytes: &[u8], format: BitFormat) -> Result<BitStream, (usize, String)> {
    match format {
        BitFormat::Bin => Ok(BitStream::from_bytes(bytes)),
        BitFormat::Ascii => {
            let mut out = BitStream::with_capacity(bytes.len());
            for (offset, &byte) in bytes.iter().enumerate() {
                match byte {
                    b'0' => out.push(false),
                    b'1' => out.push(true),
                    b if b.is_ascii_whitespace() => {}
                    b => {
                        return Err((
                            offset,
                            format!("unexpected byte {b:#04x}, expected '0', '1' or whitespace"),
                        ))
                    }
                }
            }
            Ok(out)
        }
    }
}

pub fn read_bits(path: &Path, format: BitFormat) -> Result<BitStream, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes, format).map_err(|(offset, reason)| CliError::Parse {
        path: path.display().to_string(),
        offset,
        reason,
    })
}

/// Writes to `path`, or to standard output when `path` is `-`.
pub fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io("<stdout>", e));
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
