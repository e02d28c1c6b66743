//! Little-endian binary encoding used by the index container.

use crate::{Error, Result};

/// Types that can be written to and read back from the container byte stream.
pub trait Persist: Sized {
    fn write(&self, w: &mut Writer);
    fn read(r: &mut Reader) -> Result<Self>;
}

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.buf
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn put_bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_i64(&mut self, v: i64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_words(&mut self, words: &[u64]) {
        self.put_u64(words.len() as u64);
        for &w in words {
            self.put_u64(w);
        }
    }

    /// Writes `item` as a section prefixed by its byte length.
    pub fn put_section<T: Persist>(&mut self, item: &T) {
        let mut inner = Writer::new();
        item.write(&mut inner);
        self.put_u64(inner.buf.len() as u64);
        self.buf.extend_from_slice(&inner.buf);
    }

    pub fn put_vec<T: Persist>(&mut self, items: &[T]) {
        self.put_u64(items.len() as u64);
        for it in items {
            it.write(self);
        }
    }

    pub fn put_option<T: Persist>(&mut self, item: &Option<T>) {
        match item {
            None => self.put_u8(0),
            Some(v) => {
                self.put_u8(1);
                v.write(self);
            }
        }
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn corrupt(&self, what: &str) -> Error {
        Error::Format(format!("corrupt {what} at byte {}", self.pos))
    }

    pub fn get_bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::Format(format!(
                "unexpected end of data at byte {} (wanted {n} bytes)",
                self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn get_u8(&mut self) -> Result<u8> {
        Ok(self.get_bytes(1)?[0])
    }

    pub fn get_u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.get_bytes(4)?.try_into().unwrap()))
    }

    pub fn get_u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.get_bytes(8)?.try_into().unwrap()))
    }

    pub fn get_i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.get_bytes(8)?.try_into().unwrap()))
    }

    fn get_len(&mut self, elem_size: usize) -> Result<usize> {
        let n = self.get_u64()? as usize;
        if n.checked_mul(elem_size)
            .is_none_or(|b| b > self.remaining())
        {
            return Err(self.corrupt("length prefix"));
        }
        Ok(n)
    }

    pub fn get_words(&mut self) -> Result<Vec<u64>> {
        let n = self.get_len(8)?;
        (0..n).map(|_| self.get_u64()).collect()
    }

    pub fn get_section<T: Persist>(&mut self) -> Result<T> {
        let n = self.get_len(1)?;
        let bytes = self.get_bytes(n)?;
        let mut inner = Reader::new(bytes);
        let v = T::read(&mut inner)?;
        if inner.remaining() != 0 {
            return Err(self.corrupt("section trailer"));
        }
        Ok(v)
    }

    pub fn get_vec<T: Persist>(&mut self) -> Result<Vec<T>> {
        // Every element occupies at least one byte.
        let n = self.get_len(1)?;
        (0..n).map(|_| T::read(self)).collect()
    }

    pub fn get_option<T: Persist>(&mut self) -> Result<Option<T>> {
        match self.get_u8()? {
            0 => Ok(None),
            1 => Ok(Some(T::read(self)?)),
            _ => Err(self.corrupt("option tag")),
        }
    }
}

impl Persist for u64 {
    fn write(&self, w: &mut Writer) {
        w.put_u64(*self);
    }
    fn read(r: &mut Reader) -> Result<Self> {
        r.get_u64()
    }
}

impl Persist for u32 {
    fn write(&self, w: &mut Writer) {
        w.put_u32(*self);
    }
    fn read(r: &mut Reader) -> Result<Self> {
        r.get_u32()
    }
}
