//! On-disk level files: a 32-byte header followed by ascending little-endian
//! `u64` codes.
//!
//! ```text
//! 0   magic "PSLV"
//! 4   version    u32 LE
//! 8   board tag  u8
//! 9   class tag  u8
//! 10  reserved   6 bytes (zero)
//! 16  level n    u32 LE
//! 20  reserved   u32 (zero)
//! 24  count      u64 LE
//! 32  codes...
//! ```

use std::borrow::Cow;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use memmap2::Mmap;
use sha2::{Digest, Sha256};

use crate::board::BoardId;
use crate::class::ClassName;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"PSLV";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub board: BoardId,
    pub class: ClassName,
    pub level: u32,
    pub count: u64,
}

impl Header {
    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(MAGIC);
        out[4..8].copy_from_slice(&VERSION.to_le_bytes());
        out[8] = self.board.tag();
        out[9] = self.class.tag();
        out[16..20].copy_from_slice(&self.level.to_le_bytes());
        out[24..32].copy_from_slice(&self.count.to_le_bytes());
        out
    }

    pub fn decode(bytes: &[u8], path: &Path) -> Result<Header> {
        let bad = |msg: &str| Error::Format {
            path: path.to_path_buf(),
            msg: msg.to_string(),
        };
        if bytes.len() < HEADER_LEN {
            return Err(bad("truncated header"));
        }
        if &bytes[0..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let board = BoardId::from_tag(bytes[8]).ok_or_else(|| bad("unknown board tag"))?;
        let class = ClassName::from_tag(bytes[9]).ok_or_else(|| bad("unknown class tag"))?;
        Ok(Header {
            board,
            class,
            level: u32::from_le_bytes(bytes[16..20].try_into().unwrap()),
            count: u64::from_le_bytes(bytes[24..32].try_into().unwrap()),
        })
    }
}

/// Streams codes into a level file, hashing them as it goes.
pub struct LevelWriter {
    out: BufWriter<File>,
    path: PathBuf,
    header: Header,
    hasher: Sha256,
    last: Option<u64>,
}

impl LevelWriter {
    pub fn create(path: &Path, board: BoardId, class: ClassName, level: u32) -> Result<Self> {
        let header = Header {
            board,
            class,
            level,
            count: 0,
        };
        let mut out = BufWriter::with_capacity(1 << 20, File::create(path)?);
        out.write_all(&header.encode())?;
        Ok(LevelWriter {
            out,
            path: path.to_path_buf(),
            header,
            hasher: Sha256::new(),
            last: None,
        })
    }

    /// Codes must arrive strictly ascending.
    pub fn push(&mut self, code: u64) -> Result<()> {
        if let Some(last) = self.last {
            if code <= last {
                return Err(Error::Format {
                    path: self.path.clone(),
                    msg: format!("codes out of order: {code:#x} after {last:#x}"),
                });
            }
        }
        let bytes = code.to_le_bytes();
        self.out.write_all(&bytes)?;
        self.hasher.update(bytes);
        self.header.count += 1;
        self.last = Some(code);
        Ok(())
    }

    /// Returns `(count, checksum)`.
    pub fn finish(mut self) -> Result<(u64, String)> {
        self.out.flush()?;
        let mut file = self.out.into_inner().map_err(|e| e.into_error())?;
        file.seek(SeekFrom::Start(0))?;
        file.write_all(&self.header.encode())?;
        file.sync_all()?;
        Ok((self.header.count, hex::encode(self.hasher.finalize())))
    }
}

pub fn write_level(path: &Path, board: BoardId, class: ClassName, level: u32, codes: &[u64]) -> Result<(u64, String)> {
    let mut w = LevelWriter::create(path, board, class, level)?;
    for &c in codes {
        w.push(c)?;
    }
    w.finish()
}

/// A memory-mapped level file.
pub struct LevelFile {
    pub header: Header,
    path: PathBuf,
    map: Option<Mmap>,
}

impl LevelFile {
    pub fn open(path: &Path) -> Result<LevelFile> {
        let file = File::open(path)?;
        let len = file.metadata()?.len() as usize;
        let mut head = [0u8; HEADER_LEN];
        (&file).read_exact(&mut head).map_err(|_| Error::Format {
            path: path.to_path_buf(),
            msg: "truncated header".into(),
        })?;
        let header = Header::decode(&head, path)?;
        if len != HEADER_LEN + 8 * header.count as usize {
            return Err(Error::Format {
                path: path.to_path_buf(),
                msg: format!("length {len} does not match count {}", header.count),
            });
        }
        // empty files cannot be mapped
        let map = if header.count > 0 {
            Some(unsafe { Mmap::map(&file)? })
        } else {
            None
        };
        Ok(LevelFile {
            header,
            path: path.to_path_buf(),
            map,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.header.count as usize
    }

    pub fn is_empty(&self) -> bool {
        self.header.count == 0
    }

    fn body(&self) -> &[u8] {
        match &self.map {
            Some(m) => &m[HEADER_LEN..],
            None => &[],
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        let b = &self.body()[8 * i..8 * i + 8];
        u64::from_le_bytes(b.try_into().unwrap())
    }

    /// The codes as a slice, borrowed from the map where the layout allows.
    pub fn codes(&self) -> Cow<'_, [u64]> {
        let body = self.body();
        if cfg!(target_endian = "little") {
            // SAFETY: any bit pattern is a valid u64; alignment is checked below.
            let (pre, mid, post) = unsafe { body.align_to::<u64>() };
            if pre.is_empty() && post.is_empty() {
                return Cow::Borrowed(mid);
            }
        }
        Cow::Owned(
            body.chunks_exact(8)
                .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )
    }

    pub fn contains(&self, code: u64) -> bool {
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let v = self.get(mid);
            if v == code {
                return true;
            }
            if v < code {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        false
    }

    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.body()))
    }

    /// Checks the codes are strictly ascending.
    pub fn check_sorted(&self) -> bool {
        let codes = self.codes();
        codes.windows(2).all(|w| w[0] < w[1])
    }
}

/// Sequential reader over a headerless run file of LE codes.
pub struct RunReader {
    inner: BufReader<File>,
}

impl RunReader {
    pub fn open(path: &Path) -> io::Result<Self> {
        Ok(RunReader {
            inner: BufReader::with_capacity(1 << 16, File::open(path)?),
        })
    }
}

impl Iterator for RunReader {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mut buf = [0u8; 8];
        match self.inner.read_exact(&mut buf) {
            Ok(()) => Some(u64::from_le_bytes(buf)),
            Err(_) => None,
        }
    }
}

pub fn write_run(path: &Path, codes: &[u64]) -> io::Result<()> {
    let mut out = BufWriter::with_capacity(1 << 20, File::create(path)?);
    for c in codes {
        out.write_all(&c.to_le_bytes())?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let h = Header {
            board: BoardId::Hex37,
            class: ClassName::B,
            level: 19,
            count: 364_696_466,
        };
        let bytes = h.encode();
        assert_eq!(&bytes[0..4], b"PSLV");
        assert_eq!(Header::decode(&bytes, Path::new("x")).unwrap(), h);
        let mut bad = bytes;
        bad[0] = b'X';
        assert!(Header::decode(&bad, Path::new("x")).is_err());
    }

    #[test]
    fn write_then_query() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("level.bin");
        let codes = [3u64, 9, 10, 1 << 40];
        let (count, sum) = write_level(&path, BoardId::English33, ClassName::A, 2, &codes).unwrap();
        assert_eq!(count, 4);
        let f = LevelFile::open(&path).unwrap();
        assert_eq!(f.header.level, 2);
        assert_eq!(f.codes().as_ref(), &codes);
        assert_eq!(f.checksum(), sum);
        assert!(f.contains(9) && f.contains(1 << 40) && !f.contains(4) && !f.contains(0));
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 32 + 32);
        assert_eq!(&bytes[32..40], &3u64.to_le_bytes());
    }

    #[test]
    fn unsorted_codes_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("level.bin");
        assert!(write_level(&path, BoardId::English33, ClassName::A, 1, &[5, 5]).is_err());
    }

    #[test]
    fn empty_level_opens() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("level.bin");
        write_level(&path, BoardId::English33, ClassName::A, 33, &[]).unwrap();
        let f = LevelFile::open(&path).unwrap();
        assert!(f.is_empty());
        assert!(!f.contains(1));
    }
}
