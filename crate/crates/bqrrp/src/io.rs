//! Binary matrix files: magic "BQM1", little-endian u64 rows and cols,
//! then rows*cols f64 values column-major. Round-trips bit-exactly.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"BQM1";

pub fn write_bqm(path: &Path, m: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(m.rows() as u64).to_le_bytes())?;
    w.write_all(&(m.cols() as u64).to_le_bytes())?;
    for v in m.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bqm(path: &Path) -> Result<DenseMatrix> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::BadFormat(format!("bad magic {magic:?}, expected \"BQM1\"")));
    }
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf8)?;
    let rows = u64::from_le_bytes(buf8) as usize;
    r.read_exact(&mut buf8)?;
    let cols = u64::from_le_bytes(buf8) as usize;
    let count = rows.checked_mul(cols).ok_or_else(|| Error::BadFormat("size overflow".into()))?;
    let mut data = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut buf8)?;
        data.push(f64::from_le_bytes(buf8));
    }
    // Trailing garbage means the file is not what it claims to be.
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(Error::BadFormat("trailing bytes after matrix payload".into()));
    }
    DenseMatrix::from_col_major(rows, cols, data)
}
