//! Optional on-disk cache for computed polynomial tables.
//!
//! The cache is a small JSON document keyed by canonical word pairs and
//! stamped with a fingerprint of the Coxeter matrix plus the ball bound. A
//! stale stamp makes the file invisible (the caller recomputes); a matching
//! stamp with unreadable contents is reported as an error rather than being
//! silently dropped.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coxeter::CoxeterMatrix;
use crate::poly::{IntPoly, PolyCtx};
use crate::Result;

const FORMAT_VERSION: u32 = 1;

/// 64-bit FNV-1a, used only to fingerprint matrices for cache validation.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Stable hex fingerprint of a matrix (over its canonical JSON form).
pub fn matrix_fingerprint(matrix: &CoxeterMatrix) -> String {
    format!("{:016x}", fnv1a_64(matrix.to_json_string().as_bytes()))
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    matrix: String,
    bound: u32,
    r: BTreeMap<String, IntPoly>,
    kl: BTreeMap<String, IntPoly>,
}

/// Seeds `ctx` from a cache file. Returns whether anything was loaded; a
/// missing file or a stamp for a different matrix/bound/version loads
/// nothing and is not an error.
pub fn load_into(path: &Path, ctx: &mut PolyCtx) -> Result<bool> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(false),
        Err(e) => return Err(e.into()),
    };
    let file: CacheFile = serde_json::from_str(&text)?;
    let ball = ctx.ball();
    if file.version != FORMAT_VERSION
        || file.matrix != matrix_fingerprint(ball.matrix())
        || file.bound != ball.bound()
    {
        return Ok(false);
    }
    ctx.import_tables(&file.r, &file.kl)?;
    Ok(true)
}

/// Writes the context's memo tables next to their validity stamp.
pub fn save_from(path: &Path, ctx: &PolyCtx) -> Result<()> {
    let (r, kl) = ctx.export_tables();
    let ball = ctx.ball();
    let file = CacheFile {
        version: FORMAT_VERSION,
        matrix: matrix_fingerprint(ball.matrix()),
        bound: ball.bound(),
        r,
        kl,
    };
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterMatrix, GroupBall, Word};
    use crate::poly::IntPoly;

    fn ball(m: u32, bound: u32) -> GroupBall {
        let mat =
            CoxeterMatrix::with_names(&[vec![1, m], vec![m, 1]], vec!["s".into(), "t".into()])
                .unwrap();
        GroupBall::build(mat, bound).unwrap()
    }

    #[test]
    fn fingerprints_distinguish_matrices() {
        let a = ball(3, 3);
        let b = ball(4, 4);
        assert_ne!(matrix_fingerprint(a.matrix()), matrix_fingerprint(b.matrix()));
        assert_eq!(matrix_fingerprint(a.matrix()), matrix_fingerprint(a.matrix()));
    }

    #[test]
    fn round_trip_and_stamp_mismatch() {
        let dir = std::env::temp_dir().join(format!("bruhat-cache-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m3.json");

        let b3 = ball(3, 3);
        let top = b3
            .locate(&Word::parse(b3.matrix(), "s.t.s").unwrap())
            .unwrap()
            .unwrap();
        let mut ctx = PolyCtx::new(&b3);
        let r = ctx.r_polynomial(b3.identity(), top);
        ctx.kl_polynomial(b3.identity(), top);
        save_from(&path, &ctx).unwrap();

        let mut fresh = PolyCtx::new(&b3);
        assert!(load_into(&path, &mut fresh).unwrap());
        assert_eq!(fresh.r_polynomial(b3.identity(), top), r);

        // Same matrix at a different bound: the stamp rejects the file.
        let wider = ball(3, 5);
        let mut other = PolyCtx::new(&wider);
        assert!(!load_into(&path, &mut other).unwrap());

        // Different matrix entirely.
        let b4 = ball(4, 4);
        let mut ctx4 = PolyCtx::new(&b4);
        assert!(!load_into(&path, &mut ctx4).unwrap());

        assert!(!load_into(&dir.join("absent.json"), &mut fresh).unwrap());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn fnv_reference_values() {
        // Standard FNV-1a test vectors.
        assert_eq!(fnv1a_64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a_64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a_64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn cache_preserves_polynomials_exactly() {
        let b4 = ball(4, 4);
        let mut ctx = PolyCtx::new(&b4);
        for y in b4.ids() {
            for x in b4.interval_below(y) {
                ctx.r_polynomial(x, y);
                ctx.kl_polynomial(x, y);
            }
        }
        let (r, kl) = ctx.export_tables();
        assert!(kl.values().all(|p| *p == IntPoly::one()));

        let mut fresh = PolyCtx::new(&b4);
        fresh.import_tables(&r, &kl).unwrap();
        let (r2, kl2) = fresh.export_tables();
        assert_eq!(r, r2);
        assert_eq!(kl, kl2);
    }
}
