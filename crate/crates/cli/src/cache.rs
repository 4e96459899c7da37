//! Content-addressed output cache. An entry is stored under the SHA-256 of its request key and
//! carries the digest of its payload; an entry whose key or digest does not match is discarded
//! and recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    digest: String,
    payload: String,
}

pub enum Lookup {
    Hit(String),
    Miss,
    Corrupt,
}

pub struct Cache {
    dir: PathBuf,
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Cache> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn key(request: &str) -> String {
        sha256_hex(request)
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Lookup {
        let Ok(text) = fs::read_to_string(self.path(key)) else {
            return Lookup::Miss;
        };
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.key == key && e.digest == sha256_hex(&e.payload) => Lookup::Hit(e.payload),
            _ => Lookup::Corrupt,
        }
    }

    pub fn put(&self, key: &str, payload: &str) -> std::io::Result<()> {
        let entry = Entry { key: key.to_string(), digest: sha256_hex(payload), payload: payload.to_string() };
        let tmp = self.dir.join(format!("{key}.tmp"));
        fs::write(&tmp, serde_json::to_string(&entry).expect("entry serializes"))?;
        fs::rename(tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let key = Cache::key("request");
        assert!(matches!(cache.get(&key), Lookup::Miss));
        cache.put(&key, "payload").unwrap();
        assert!(matches!(cache.get(&key), Lookup::Hit(p) if p == "payload"));
        let path = cache.path(&key);
        let text = fs::read_to_string(&path).unwrap().replace("payload", "tampered");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.get(&key), Lookup::Corrupt));
        fs::write(&path, "not json").unwrap();
        assert!(matches!(cache.get(&key), Lookup::Corrupt));
    }
}
