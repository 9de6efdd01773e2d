//! Flat little-endian tensor archive with a manifest.
//!
//! Serialization format for model parameters and checkpoints. Layout
//! (all integers little-endian):
//!
//! ```text
//! magic  "NTA1"
//! u32    meta entry count
//!        per entry: u16 key len, key bytes, u32 value len, value bytes (UTF-8)
//! u32    tensor count
//!        per tensor: u16 name len, name bytes, u8 dtype (0 = f32),
//!                    u8 rank, u32 dims[rank], u64 payload offset, u64 byte len
//! u64    payload byte length
//!        payload: tensor data in manifest order, f32 little-endian
//! ```
//!
//! Metadata keys are free-form; writers keep them sorted so identical inputs
//! produce identical bytes.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::Error;
use crate::Result;

pub const ARCHIVE_MAGIC: &[u8; 4] = b"NTA1";

#[derive(Debug, Clone)]
pub struct ArchiveTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

#[derive(Debug, Clone, Default)]
pub struct Archive {
    pub meta: Vec<(String, String)>,
    pub tensors: Vec<ArchiveTensor>,
}

impl Archive {
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require_meta(&self, key: &str) -> Result<&str> {
        self.meta_value(key)
            .ok_or_else(|| Error::Corrupt(format!("archive missing metadata key `{key}`")))
    }

    pub fn tensor(&self, name: &str) -> Option<&ArchiveTensor> {
        self.tensors.iter().find(|t| t.name == name)
    }
}

pub fn write_archive(
    path: &Path,
    meta: &[(String, String)],
    tensors: &[(String, Vec<usize>, &[f32])],
) -> Result<()> {
    let mut sorted_meta: Vec<_> = meta.to_vec();
    sorted_meta.sort();

    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(ARCHIVE_MAGIC);
    buf.extend_from_slice(&(sorted_meta.len() as u32).to_le_bytes());
    for (k, v) in &sorted_meta {
        buf.extend_from_slice(&(k.len() as u16).to_le_bytes());
        buf.extend_from_slice(k.as_bytes());
        buf.extend_from_slice(&(v.len() as u32).to_le_bytes());
        buf.extend_from_slice(v.as_bytes());
    }

    buf.extend_from_slice(&(tensors.len() as u32).to_le_bytes());
    let mut offset: u64 = 0;
    for (name, shape, data) in tensors {
        let n: usize = shape.iter().product();
        if n != data.len() {
            return Err(Error::Shape(format!(
                "tensor `{name}`: shape {:?} does not match data length {}",
                shape,
                data.len()
            )));
        }
        buf.extend_from_slice(&(name.len() as u16).to_le_bytes());
        buf.extend_from_slice(name.as_bytes());
        buf.push(0u8); // dtype f32
        buf.push(shape.len() as u8);
        for d in shape.iter() {
            buf.extend_from_slice(&(*d as u32).to_le_bytes());
        }
        let byte_len = (data.len() * 4) as u64;
        buf.extend_from_slice(&offset.to_le_bytes());
        buf.extend_from_slice(&byte_len.to_le_bytes());
        offset += byte_len;
    }

    buf.extend_from_slice(&offset.to_le_bytes());
    for (_, _, data) in tensors {
        for v in data.iter() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }

    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))?;
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Corrupt("archive truncated".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn string(&mut self, n: usize) -> Result<String> {
        String::from_utf8(self.take(n)?.to_vec())
            .map_err(|_| Error::Corrupt("archive string is not valid UTF-8".into()))
    }
}

pub fn read_archive(path: &Path) -> Result<Archive> {
    let mut raw = Vec::new();
    fs::File::open(path)
        .map_err(|e| Error::io(path, e))?
        .read_to_end(&mut raw)
        .map_err(|e| Error::io(path, e))?;
    let mut r = Reader { buf: &raw, pos: 0 };

    if r.take(4)? != ARCHIVE_MAGIC {
        return Err(Error::Format(format!(
            "{}: not a tensor archive (bad magic)",
            path.display()
        )));
    }

    let meta_count = r.u32()? as usize;
    let mut meta = Vec::with_capacity(meta_count);
    for _ in 0..meta_count {
        let klen = r.u16()? as usize;
        let key = r.string(klen)?;
        let vlen = r.u32()? as usize;
        let value = r.string(vlen)?;
        meta.push((key, value));
    }

    let tensor_count = r.u32()? as usize;
    struct Entry {
        name: String,
        shape: Vec<usize>,
        offset: u64,
        byte_len: u64,
    }
    let mut entries = Vec::with_capacity(tensor_count);
    for _ in 0..tensor_count {
        let nlen = r.u16()? as usize;
        let name = r.string(nlen)?;
        let dtype = r.u8()?;
        if dtype != 0 {
            return Err(Error::Corrupt(format!(
                "tensor `{name}`: unsupported dtype code {dtype}"
            )));
        }
        let rank = r.u8()? as usize;
        let mut shape = Vec::with_capacity(rank);
        for _ in 0..rank {
            shape.push(r.u32()? as usize);
        }
        let offset = r.u64()?;
        let byte_len = r.u64()?;
        let n: usize = shape.iter().product();
        if byte_len != (n * 4) as u64 {
            return Err(Error::Corrupt(format!(
                "tensor `{name}`: byte length {byte_len} inconsistent with shape {shape:?}"
            )));
        }
        entries.push(Entry {
            name,
            shape,
            offset,
            byte_len,
        });
    }

    let payload_len = r.u64()? as usize;
    let payload = r.take(payload_len)?;
    if r.pos != raw.len() {
        return Err(Error::Corrupt("archive has trailing bytes".into()));
    }

    let mut tensors = Vec::with_capacity(entries.len());
    for e in entries {
        let start = e.offset as usize;
        let end = start + e.byte_len as usize;
        if end > payload.len() {
            return Err(Error::Corrupt(format!(
                "tensor `{}`: payload range out of bounds",
                e.name
            )));
        }
        let data: Vec<f32> = payload[start..end]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        tensors.push(ArchiveTensor {
            name: e.name,
            shape: e.shape,
            data,
        });
    }

    Ok(Archive { meta, tensors })
}
