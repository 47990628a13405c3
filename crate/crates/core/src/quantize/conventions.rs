// Generated by `calibrate::render` from the exact calibration in calibrate.rs.
// Regenerate with FUZZYLOOP_BLESS=1 cargo test -p fuzzyloop-core conventions_file.

/// Global sign s in {f, g}_ω = s · 2 · {f, g}_KKS.
pub const BRACKET_SIGN: i64 = 1;

/// 2·ι on gl(2) as (re, im) pairs: rows x, y, z; columns a, b, c, d of [[a, b], [c, d]].
pub const IOTA_DOUBLED: [[(i64, i64); 4]; 3] = [
    [(0, 0), (0, -1), (0, -1), (0, 0)],
    [(0, 0), (-1, 0), (1, 0), (0, 0)],
    [(0, -1), (0, 0), (0, 0), (0, 1)],
];
