//! Binary frame dumps.
//!
//! Layout (all little-endian): the 8-byte magic `JSTSFRM1`, `N` and `Ts` as
//! `u32`, then `N * Ts` complex samples as interleaved `(re, im)` `f64` pairs,
//! slot by slot (all chips of slot 0 first).

use std::io::{Read, Write};

use nalgebra::{Complex, DMatrix};

use crate::{Error, Result};

pub const MAGIC: &[u8; 8] = b"JSTSFRM1";
pub const HEADER_LEN: usize = 16;

pub fn write_frame<W: Write>(mut w: W, y: &DMatrix<Complex<f64>>) -> Result<()> {
    let n = u32::try_from(y.nrows()).map_err(|_| Error::Format("N exceeds u32".into()))?;
    let ts = u32::try_from(y.ncols()).map_err(|_| Error::Format("Ts exceeds u32".into()))?;
    let mut buf = Vec::with_capacity(HEADER_LEN + 16 * y.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&ts.to_le_bytes());
    // nalgebra storage is column-major, which is exactly slot-by-slot.
    for z in y.iter() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_frame<R: Read>(mut r: R) -> Result<DMatrix<Complex<f64>>> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    if &header[..8] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let ts = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let mut body = vec![0u8; 16 * n * ts];
    r.read_exact(&mut body)
        .map_err(|e| Error::Format(format!("truncated body for {n} x {ts}: {e}")))?;
    let samples = body.chunks_exact(16).map(|c| {
        Complex::new(
            f64::from_le_bytes(c[..8].try_into().unwrap()),
            f64::from_le_bytes(c[8..].try_into().unwrap()),
        )
    });
    Ok(DMatrix::from_iterator(n, ts, samples))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn header_layout() {
        let y = DMatrix::from_fn(3, 2, |i, t| Complex::new(i as f64, t as f64 + 0.5));
        let mut out = Vec::new();
        write_frame(&mut out, &y).unwrap();
        assert_eq!(out.len(), 16 + 16 * 6);
        assert_eq!(&out[..8], b"JSTSFRM1");
        assert_eq!(&out[8..12], &3u32.to_le_bytes());
        assert_eq!(&out[12..16], &2u32.to_le_bytes());
        // second sample is chip 1 of slot 0
        assert_eq!(f64::from_le_bytes(out[32..40].try_into().unwrap()), 1.0);
        assert_eq!(f64::from_le_bytes(out[40..48].try_into().unwrap()), 0.5);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_frame(&b"NOTAFRAMEHEADER!"[..]).is_err());
        let mut out = Vec::new();
        write_frame(&mut out, &DMatrix::from_element(2, 2, Complex::new(1.0, 1.0))).unwrap();
        out.truncate(out.len() - 1);
        assert!(matches!(read_frame(&out[..]), Err(Error::Format(_))));
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..6, ts in 1usize..5, vals in proptest::collection::vec(-1e6f64..1e6, 60)) {
            let y = DMatrix::from_fn(n, ts, |i, t| Complex::new(vals[2 * (i * ts + t)], vals[2 * (i * ts + t) + 1]));
            let mut out = Vec::new();
            write_frame(&mut out, &y).unwrap();
            prop_assert_eq!(read_frame(&out[..]).unwrap(), y);
        }
    }
}
