//! Exact ideal-count tables for ζ_K and the log-moment partial sums of the
//! limit formula.
//!
//! a_K(n) = #{ideals of norm n} is the Dirichlet convolution 1 ∗ χ_D, so a
//! divisor-pass sieve (add χ_D(e) to every multiple of e) produces the table
//! in O(x log x) integer additions. A second, structurally different build —
//! multiplicative over prime powers via the splitting type — exists for
//! cross-checking; the two must agree bit for bit, because all cancellation
//! happens in Z.
//!
//! N_K(t) = Σ_{n≤t} a_K(n) grows like γ₋₁(K)·t with error O(t^(1−1/m)); the
//! log-moment sums Σ a_K(k)(log k)^n/k feed the limit-formula route, whose
//! accuracy is capped by that error term, far above the summation error of
//! the compensated f64 fast path used below.

use std::io::{Read, Write};
use std::path::Path;

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::field::{splitting_type, FieldDescriptor, SplittingType};
use crate::numeric::{ln, Mag, Val, N_CAP, RM};

/// Memory budget guard: counts (i32) plus prefix (u64) per slot.
pub const DEFAULT_XMAX_LIMIT: u64 = 200_000_000;

/// Fixed block length of the deterministic blockwise summation.
pub const SUM_BLOCK: usize = 1 << 16;

/// Cache dump format version.
pub const CACHE_VERSION: u32 = 1;

const CACHE_MAGIC: &[u8; 4] = b"IDCT";

/// Exact ideal counts a_K(n) for n ≤ xmax with prefix sums N_K(t).
#[derive(Clone, Debug)]
pub struct IdealCountTable {
    field: FieldDescriptor,
    xmax: u64,
    /// counts[n] = a_K(n); index 0 unused.
    counts: Vec<u32>,
    /// prefix[t] = N_K(t); prefix[0] = 0.
    prefix: Vec<u64>,
}

impl IdealCountTable {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn xmax(&self) -> u64 {
        self.xmax
    }

    /// a_K(n); panics outside 1..=xmax.
    pub fn count(&self, n: u64) -> u32 {
        self.counts[n as usize]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts[1..]
    }

    /// N_K(xmax) = total number of ideals covered by the table.
    pub fn total(&self) -> u64 {
        self.prefix[self.xmax as usize]
    }
}

/// Builds the table by the divisor-pass sieve.
pub fn build_ideal_counts(field: &FieldDescriptor, xmax: u64) -> Result<IdealCountTable> {
    build_ideal_counts_bounded(field, xmax, DEFAULT_XMAX_LIMIT)
}

/// `build_ideal_counts` with an explicit memory-budget cap.
pub fn build_ideal_counts_bounded(
    field: &FieldDescriptor,
    xmax: u64,
    limit: u64,
) -> Result<IdealCountTable> {
    if xmax < 1 {
        return Err(Error::OutOfRange("xmax must be at least 1".into()));
    }
    if xmax > limit {
        return Err(Error::BoundExceeded(format!(
            "xmax = {xmax} exceeds the table budget {limit}"
        )));
    }
    let n = xmax as usize;
    let mut acc = vec![0i32; n + 1];
    if field.is_rational() {
        // a_Q(n) = 1 for every n.
        for v in acc.iter_mut().skip(1) {
            *v = 1;
        }
    } else {
        // a_K = 1 ∗ χ_D: partial sums over divisors may dip negative, so
        // accumulate in i32 and convert once finished.
        for e in 1..=n {
            let c = field.chi(e as u64) as i32;
            if c == 0 {
                continue;
            }
            let mut multiple = e;
            while multiple <= n {
                acc[multiple] += c;
                multiple += e;
            }
        }
    }
    finish_table(field.clone(), xmax, acc)
}

/// Builds the same table multiplicatively over prime powers: a smallest-
/// prime-factor sieve factors each index, and a_K(p^k) comes from the
/// splitting type of p. Used as the independent cross-check of the
/// divisor-pass sieve.
pub fn build_ideal_counts_multiplicative(
    field: &FieldDescriptor,
    xmax: u64,
) -> Result<IdealCountTable> {
    if xmax < 1 {
        return Err(Error::OutOfRange("xmax must be at least 1".into()));
    }
    if xmax > DEFAULT_XMAX_LIMIT {
        return Err(Error::BoundExceeded(format!(
            "xmax = {xmax} exceeds the table budget {DEFAULT_XMAX_LIMIT}"
        )));
    }
    let n = xmax as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let prime_power_count = |p: u64, k: u32| -> i32 {
        if field.is_rational() {
            return 1;
        }
        match splitting_type(&field.clone(), p).expect("quadratic field") {
            SplittingType::Split => k as i32 + 1,
            SplittingType::Inert => {
                if k % 2 == 0 {
                    1
                } else {
                    0
                }
            }
            SplittingType::Ramified => 1,
        }
    };
    let mut acc = vec![0i32; n + 1];
    acc[1] = 1;
    for i in 2..=n {
        let p = spf[i] as u64;
        // strip p^k from i
        let mut rest = i as u64;
        let mut k = 0u32;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        acc[i] = acc[rest as usize] * prime_power_count(p, k);
    }
    finish_table(field.clone(), xmax, acc)
}

fn finish_table(field: FieldDescriptor, xmax: u64, acc: Vec<i32>) -> Result<IdealCountTable> {
    let mut counts = Vec::with_capacity(acc.len());
    let mut prefix = Vec::with_capacity(acc.len());
    let mut running = 0u64;
    prefix.push(0);
    counts.push(0);
    for (n, &v) in acc.iter().enumerate().skip(1) {
        debug_assert!(v >= 0, "a_K({n}) = {v} negative");
        counts.push(v as u32);
        running += v as u64;
        prefix.push(running);
    }
    debug_assert_eq!(counts[1], 1, "the unit ideal");
    Ok(IdealCountTable {
        field,
        xmax,
        counts,
        prefix,
    })
}

/// N_K(t) for real t; zero below 1, error above the table range.
pub fn ideal_count_prefix(table: &IdealCountTable, t: f64) -> Result<u64> {
    if !(t >= 0.0) {
        return Err(Error::OutOfRange(format!("t = {t}")));
    }
    if t > table.xmax as f64 {
        return Err(Error::OutOfRange(format!(
            "t = {t} beyond table xmax = {}",
            table.xmax
        )));
    }
    if t < 1.0 {
        return Ok(0);
    }
    Ok(table.prefix[t.floor() as usize])
}

/// Σ_{k≤x} a_K(k) (log k)^n / k, with a certified error bound.
///
/// Two arithmetic backends sit behind the same contract:
///
/// * `precision ≤ 128`: IEEE doubles with Neumaier compensation inside
///   fixed 2^16-length blocks, blocks combined in index order. The summation
///   is deterministic and its certified bound (≲ 10⁻¹² absolute at
///   x = 10⁷) is orders of magnitude below the x^(−1/m) model error of the
///   limit formula this sum feeds.
/// * `precision > 128`: term-by-term evaluation in `precision`-bit
///   arithmetic. Cost is one big-float log per index; meant for moderate x.
pub fn log_moment_sum(table: &IdealCountTable, n: usize, x: f64, precision: usize) -> Result<Val> {
    if precision < 64 {
        return Err(Error::PrecisionTooLow {
            got: precision,
            min: 64,
        });
    }
    if n > N_CAP {
        return Err(Error::IndexTooLarge { got: n, cap: N_CAP });
    }
    if !(1.0 <= x) || x > table.xmax as f64 {
        return Err(Error::OutOfRange(format!(
            "x = {x} outside [1, {}]",
            table.xmax
        )));
    }
    let last = x.floor() as u64;
    if precision <= 128 {
        let (sum, abs_sum) = log_moment_sum_f64(table, n, last);
        let p = 128;
        // Per-term model: ln has ≤ 1 ulp error amplified by the n-th power,
        // division and multiply add a few more; compensated accumulation
        // leaves ~2 eps relative on the total.
        let eps = 2f64.powi(-52);
        let err = (n as f64 + 6.0) * eps * abs_sum;
        Ok(Val::new(
            BigFloat::from_f64(sum, p),
            Mag::from_log2(err.log2()),
        ))
    } else {
        Ok(log_moment_sum_big(table, n, last, precision))
    }
}

fn log_moment_sum_f64(table: &IdealCountTable, n: usize, last: u64) -> (f64, f64) {
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    let add = |term: f64, total: &mut f64, comp: &mut f64| {
        // Neumaier compensation
        let t = *total + term;
        if total.abs() >= term.abs() {
            *comp += (*total - t) + term;
        } else {
            *comp += (term - t) + *total;
        }
        *total = t;
    };
    let mut k = 1u64;
    while k <= last {
        let block_end = (k + SUM_BLOCK as u64 - 1).min(last);
        let mut block = 0.0f64;
        let mut block_comp = 0.0f64;
        for j in k..=block_end {
            let c = table.counts[j as usize];
            if c == 0 {
                continue;
            }
            let lj = (j as f64).ln();
            let term = c as f64 * lj.powi(n as i32) / j as f64;
            add(term, &mut block, &mut block_comp);
            abs_sum += term.abs();
        }
        add(block + block_comp, &mut total, &mut comp);
        k = block_end + 1;
    }
    (total + comp, abs_sum)
}

fn log_moment_sum_big(table: &IdealCountTable, n: usize, last: u64, p: usize) -> Val {
    let pw = p + 16;
    let mut total = BigFloat::new(pw);
    let mut err = Mag::ZERO;
    for k in 1..=last {
        let c = table.counts[k as usize];
        if c == 0 {
            continue;
        }
        let kb = BigFloat::from_u64(k, pw);
        let lk = ln(&kb, pw);
        let mut term = lk.powi(n, pw, RM);
        term = term.mul(&BigFloat::from_u64(c as u64, pw), pw, RM);
        term = term.div(&kb, pw, RM);
        total = total.add(&term, pw, RM);
        err = err
            .add(Mag::ulp_of(&term, pw).scale(n as f64 + 4.0))
            .add(Mag::ulp_of(&total, pw));
    }
    Val::new(total, err)
}

/// Writes the count table as a little-endian binary dump:
/// magic `IDCT`, version u32, discriminant i64, xmax u64, then
/// counts[1..=xmax] as u32.
pub fn write_count_cache(table: &IdealCountTable, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(CACHE_MAGIC)?;
    f.write_all(&CACHE_VERSION.to_le_bytes())?;
    f.write_all(&table.field.discriminant().to_le_bytes())?;
    f.write_all(&table.xmax.to_le_bytes())?;
    for &c in &table.counts[1..] {
        f.write_all(&c.to_le_bytes())?;
    }
    f.flush()?;
    Ok(())
}

/// Reads a dump back, validating magic, version, discriminant and xmax.
/// `Ok(None)` means the file is readable but stale (wrong version) or keyed
/// to a different (D, xmax); callers rebuild instead of migrating.
pub fn read_count_cache(
    field: &FieldDescriptor,
    xmax: u64,
    path: &Path,
) -> Result<Option<IdealCountTable>> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut head = [0u8; 24];
    if f.read_exact(&mut head).is_err() {
        return Err(Error::BadCacheFile("truncated header".into()));
    }
    if &head[0..4] != CACHE_MAGIC {
        return Err(Error::BadCacheFile("bad magic".into()));
    }
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    let d = i64::from_le_bytes(head[8..16].try_into().unwrap());
    let xm = u64::from_le_bytes(head[16..24].try_into().unwrap());
    if version != CACHE_VERSION || d != field.discriminant() || xm != xmax {
        return Ok(None);
    }
    let mut raw = Vec::new();
    f.read_to_end(&mut raw)?;
    if raw.len() != 4 * xmax as usize {
        return Err(Error::BadCacheFile(format!(
            "payload is {} bytes, expected {}",
            raw.len(),
            4 * xmax
        )));
    }
    let mut counts = Vec::with_capacity(xmax as usize + 1);
    counts.push(0u32);
    for chunk in raw.chunks_exact(4) {
        counts.push(u32::from_le_bytes(chunk.try_into().unwrap()));
    }
    let mut prefix = Vec::with_capacity(counts.len());
    let mut running = 0u64;
    prefix.push(0);
    for &c in &counts[1..] {
        running += c as u64;
        prefix.push(running);
    }
    Ok(Some(IdealCountTable {
        field: field.clone(),
        xmax,
        counts,
        prefix,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::numeric::bf_to_f64;

    // Brute-force oracle: a_K(n) = Σ_{e|n} χ_D(e).
    fn count_by_divisors(field: &FieldDescriptor, n: u64) -> i64 {
        (1..=n).filter(|e| n % e == 0).map(|e| field.chi(e) as i64).sum()
    }

    #[test]
    fn counts_match_spot_lists() {
        let q = make_field(1).unwrap();
        let tq = build_ideal_counts(&q, 10).unwrap();
        assert_eq!(tq.counts(), &[1u32; 10]);
        assert_eq!(tq.total(), 10);

        let gauss = make_field(-4).unwrap();
        let tg = build_ideal_counts(&gauss, 10).unwrap();
        assert_eq!(tg.counts(), &[1, 1, 0, 1, 2, 0, 0, 1, 1, 2]);

        let d5 = make_field(5).unwrap();
        let t5 = build_ideal_counts(&d5, 10).unwrap();
        assert_eq!(t5.counts(), &[1, 0, 0, 1, 1, 0, 0, 0, 1, 0]);
    }

    #[test]
    fn counts_match_divisor_oracle() {
        for d in [-8, -7, -4, -3, 5, 12, 13] {
            let f = make_field(d).unwrap();
            let t = build_ideal_counts(&f, 2000).unwrap();
            for n in 1..=2000u64 {
                assert_eq!(
                    t.count(n) as i64,
                    count_by_divisors(&f, n),
                    "a_{d}({n})"
                );
            }
        }
    }

    #[test]
    fn two_sieves_agree_exactly() {
        for d in [-4, -3, 5, 8, -20, 21] {
            let f = make_field(d).unwrap();
            let a = build_ideal_counts(&f, 30_000).unwrap();
            let b = build_ideal_counts_multiplicative(&f, 30_000).unwrap();
            assert_eq!(a.counts, b.counts, "d = {d}");
            assert_eq!(a.prefix, b.prefix, "d = {d}");
        }
    }

    #[test]
    fn prefix_examples() {
        let q = make_field(1).unwrap();
        let tq = build_ideal_counts(&q, 100).unwrap();
        assert_eq!(ideal_count_prefix(&tq, 100.0).unwrap(), 100);
        let gauss = make_field(-4).unwrap();
        let tg = build_ideal_counts(&gauss, 10).unwrap();
        assert_eq!(ideal_count_prefix(&tg, 10.0).unwrap(), 9);
        assert_eq!(ideal_count_prefix(&tg, 0.5).unwrap(), 0);
        assert_eq!(ideal_count_prefix(&tg, 9.99).unwrap(), 7);
        assert!(ideal_count_prefix(&tg, 11.0).is_err());
    }

    #[test]
    fn log_moments_small_cases() {
        let q = make_field(1).unwrap();
        let t = build_ideal_counts(&q, 10).unwrap();
        // n = 0, x = 3: 1 + 1/2 + 1/3
        let v = log_moment_sum(&t, 0, 3.0, 64).unwrap();
        assert!((bf_to_f64(&v.x) - 11.0 / 6.0).abs() < 1e-14);
        // n = 1, x = 3: ln2/2 + ln3/3
        let v = log_moment_sum(&t, 1, 3.0, 64).unwrap();
        let expect = 2f64.ln() / 2.0 + 3f64.ln() / 3.0;
        assert!((bf_to_f64(&v.x) - expect).abs() < 1e-14);
        assert!((expect - 0.712777686502676).abs() < 1e-12);

        let gauss = make_field(-4).unwrap();
        let tg = build_ideal_counts(&gauss, 10).unwrap();
        // n = 0, x = 5: 1 + 1/2 + 1/4 + 2/5 = 2.15
        let v = log_moment_sum(&tg, 0, 5.0, 64).unwrap();
        assert!((bf_to_f64(&v.x) - 2.15).abs() < 1e-14);

        assert!(matches!(
            log_moment_sum(&t, 0, 3.0, 32),
            Err(Error::PrecisionTooLow { .. })
        ));
        assert!(log_moment_sum(&t, 0, 1e9, 64).is_err());
        assert!(log_moment_sum(&t, 80, 3.0, 64).is_err());
    }

    #[test]
    fn f64_and_bigfloat_paths_agree() {
        let f = make_field(-3).unwrap();
        let t = build_ideal_counts(&f, 3000).unwrap();
        for n in [0usize, 1, 3] {
            let fast = log_moment_sum(&t, n, 3000.0, 64).unwrap();
            let slow = log_moment_sum(&t, n, 3000.0, 192).unwrap();
            let diff = (bf_to_f64(&fast.x) - bf_to_f64(&slow.x)).abs();
            // the two backends must agree within the fast path's own bound
            assert!(
                diff <= fast.err.to_f64(),
                "n = {n}: diff {diff:e} vs bound {:e}",
                fast.err.to_f64()
            );
        }
    }

    #[test]
    fn log_moment_monotone_in_x() {
        let f = make_field(5).unwrap();
        let t = build_ideal_counts(&f, 4000).unwrap();
        let mut prev = -1.0f64;
        for x in [10.0, 100.0, 1000.0, 4000.0] {
            let v = bf_to_f64(&log_moment_sum(&t, 2, x, 64).unwrap().x);
            assert!(v >= prev, "sum decreased at x = {x}");
            prev = v;
        }
    }

    #[test]
    fn cache_roundtrip_and_keying() {
        let dir = std::env::temp_dir().join(format!("zetak-cache-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let f = make_field(-4).unwrap();
        let t = build_ideal_counts(&f, 1000).unwrap();
        let path = dir.join("idct_test.bin");
        write_count_cache(&t, &path).unwrap();

        let back = read_count_cache(&f, 1000, &path).unwrap().unwrap();
        assert_eq!(back.counts, t.counts);
        assert_eq!(back.prefix, t.prefix);

        // different xmax or field: stale, not an error
        assert!(read_count_cache(&f, 999, &path).unwrap().is_none());
        let other = make_field(5).unwrap();
        assert!(read_count_cache(&other, 1000, &path).unwrap().is_none());

        // wrong version: stale
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[4] = 99;
        std::fs::write(&path, &bytes).unwrap();
        assert!(read_count_cache(&f, 1000, &path).unwrap().is_none());

        // corrupt magic: hard error
        bytes[0] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            read_count_cache(&f, 1000, &path),
            Err(Error::BadCacheFile(_))
        ));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn cache_golden_bytes() {
        let dir = std::env::temp_dir().join(format!("zetak-golden-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let f = make_field(-4).unwrap();
        let t = build_ideal_counts(&f, 5).unwrap();
        let path = dir.join("golden.bin");
        write_count_cache(&t, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let mut expect = Vec::new();
        expect.extend_from_slice(b"IDCT");
        expect.extend_from_slice(&1u32.to_le_bytes());
        expect.extend_from_slice(&(-4i64).to_le_bytes());
        expect.extend_from_slice(&5u64.to_le_bytes());
        for c in [1u32, 1, 0, 1, 2] {
            expect.extend_from_slice(&c.to_le_bytes());
        }
        assert_eq!(bytes, expect);
        std::fs::remove_dir_all(&dir).ok();
    }
}
