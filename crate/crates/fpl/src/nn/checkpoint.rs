//! Checkpoint files: an 8-byte magic, a little-endian u32 JSON header
//! length, the JSON header, then the parameter block as little-endian f64.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{FplError, Result};
use crate::Real;

const MAGIC: &[u8; 8] = b"FPLCKPT1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    /// Architecture tag, e.g. "two_layer" or "mlp".
    pub kind: String,
    pub step: u64,
    pub seed: u64,
    pub n_params: u64,
    /// Architecture-specific configuration (widths, init knobs, ...).
    pub meta: serde_json::Value,
}

pub fn write_checkpoint(
    path: impl AsRef<Path>,
    header: &CheckpointHeader,
    params: &[Real],
) -> Result<()> {
    if header.n_params as usize != params.len() {
        return Err(FplError::Shape(format!(
            "header declares {} parameters, block has {}",
            header.n_params,
            params.len()
        )));
    }
    let json = serde_json::to_vec(header)?;
    let len = u32::try_from(json.len())
        .map_err(|_| FplError::Shape("checkpoint header exceeds u32 length".into()))?;
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(MAGIC)?;
    file.write_all(&len.to_le_bytes())?;
    file.write_all(&json)?;
    for p in params {
        file.write_all(&p.to_le_bytes())?;
    }
    file.flush()?;
    Ok(())
}

pub fn read_checkpoint(path: impl AsRef<Path>) -> Result<(CheckpointHeader, Vec<Real>)> {
    let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    file.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(FplError::InvalidSpec("not a checkpoint file (bad magic)".into()));
    }
    let mut len = [0u8; 4];
    file.read_exact(&mut len)?;
    let mut json = vec![0u8; u32::from_le_bytes(len) as usize];
    file.read_exact(&mut json)?;
    let header: CheckpointHeader = serde_json::from_slice(&json)?;
    let mut params = Vec::with_capacity(header.n_params as usize);
    let mut buf = [0u8; 8];
    for _ in 0..header.n_params {
        file.read_exact(&mut buf)?;
        params.push(Real::from_le_bytes(buf));
    }
    let mut extra = [0u8; 1];
    if file.read(&mut extra)? != 0 {
        return Err(FplError::Shape("trailing bytes after parameter block".into()));
    }
    Ok((header, params))
}
