//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line; the
//! process exits nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use brickscan_core::arith::factorize;
use brickscan_core::cuboids::{build_perfect_cuboid, verify_perfect_cuboid, CuboidWitness};
use brickscan_core::pythag::{count_triples_odd_edge, diff_square_reps, DiffSquareRep};
use brickscan_core::record::HitRecord;
use brickscan_core::search::Summary;
use serde_json::Value;

type Outcome = Result<String, String>;

const BIN: &str = env!("CARGO_BIN_EXE_brickscan");

fn brickscan(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("BRICKSCAN_WORKERS")
        .output()
        .expect("spawn brickscan")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn jsonl(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tuple_text(v: &[u128]) -> String {
    let parts: Vec<String> = v.iter().map(u128::to_string).collect();
    format!("({})", parts.join(","))
}

fn brick_tuple(rec: &Value) -> Vec<u128> {
    let b = &rec["solid"]["brick"];
    ["a", "b", "c", "d_ab", "d_ac", "d_bc"]
        .iter()
        .map(|k| b[k].as_u64().unwrap() as u128)
        .collect()
}

/// Exact integer square root by bisection, independent of the library.
fn exact_sqrt(v: u128) -> Option<u128> {
    let (mut lo, mut hi) = (0u128, 1u128 << 64);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if mid * mid <= v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * lo == v).then_some(lo)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Published primitive bricks below 1000: (n, type, d, tuple as printed).
const PUBLISHED: [(u64, u8, u128, [u128; 6]); 11] = [
    (85, 2, 366, [85, 132, 720, 157, 725, 732]),
    (117, 2, 122, [117, 44, 240, 125, 267, 244]),
    (195, 2, 3190, [195, 748, 6336, 773, 6339, 6380]),
    (231, 2, 404, [231, 160, 792, 281, 825, 808]),
    (275, 2, 174, [275, 252, 240, 373, 365, 348]),
    (495, 2, 4756, [495, 4888, 8160, 4913, 8175, 9512]),
    (855, 2, 1384, [855, 832, 2640, 1193, 2775, 2768]),
    (935, 2, 15540, [935, 17472, 25704, 17497, 25721, 31080]),
    (187, 3, 942, [187, 1584, 1020, 1595, 1037, 1884]),
    (429, 3, 1250, [429, 880, 2340, 979, 2379, 2550]),
    (693, 3, 250, [693, 480, 140, 843, 707, 500]),
];

struct Census {
    primitive: Vec<Value>,
}

fn census_scan(dir: &Path) -> Result<(Census, Duration), String> {
    let out = dir.join("census.jsonl");
    let start = Instant::now();
    let o = brickscan(&["search-bricks", "--min", "3", "--max", "999", "--workers", "1", "--out", out.to_str().unwrap()]);
    let took = start.elapsed();
    ensure(code(&o) == 0, || format!("exit code {} ({})", code(&o), String::from_utf8_lossy(&o.stderr)))?;
    let primitive = jsonl(&out)
        .into_iter()
        .filter(|r| r["primitive"] == true && r["degenerate"] == false)
        .collect();
    Ok((Census { primitive }, took))
}

fn criterion_1(census: &Census, took: Duration) -> Outcome {
    let mut by_type: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for r in &census.primitive {
        let t = r["witness"]["brick"]["brick_type"].as_u64().unwrap();
        by_type.entry(t).or_default().insert(r["n"].as_u64().unwrap());
    }
    let want2: BTreeSet<u64> = [85, 117, 195, 231, 275, 495, 855, 935].into();
    let want3: BTreeSet<u64> = [187, 429, 693].into();
    ensure(census.primitive.len() == 11, || format!("{} primitive witnesses", census.primitive.len()))?;
    ensure(!by_type.contains_key(&1), || format!("type 1 hits {:?}", by_type[&1]))?;
    ensure(by_type.get(&2) == Some(&want2), || format!("type 2 set {:?}", by_type.get(&2)))?;
    ensure(by_type.get(&3) == Some(&want3), || format!("type 3 set {:?}", by_type.get(&3)))?;
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("11 primitive (0/8/3) single worker in {:.2}s", took.as_secs_f64()))
}

fn criterion_2(census: &Census) -> Outcome {
    let mut problems = Vec::new();
    for (n, ty, d, tuple) in PUBLISHED {
        let Some(r) = census.primitive.iter().find(|r| r["n"] == n) else {
            problems.push(format!("n={n} missing"));
            continue;
        };
        let w = &r["witness"]["brick"];
        if w["d"].as_u64() != Some(d as u64) {
            problems.push(format!("n={n} d={} expected {d}", w["d"]));
        }
        if w["brick_type"].as_u64() != Some(ty as u64) {
            problems.push(format!("n={n} type={} expected {ty}", w["brick_type"]));
        }
        let got = brick_tuple(r);
        if got != tuple {
            problems.push(format!("n={n} brick {} expected verbatim {}", tuple_text(&got), tuple_text(&tuple)));
        }
    }
    let o = brickscan(&["report-paper"]);
    let text = String::from_utf8_lossy(&o.stdout);
    for (n, _, _, tuple) in PUBLISHED {
        if !text.contains(&tuple_text(&tuple)) {
            problems.push(format!("report lacks n={n} tuple {}", tuple_text(&tuple)));
        }
    }
    if code(&o) != 0 {
        problems.push(format!("report-paper exit code {}", code(&o)));
    }
    if problems.is_empty() {
        Ok("all d-values and tuples verbatim, report exit 0".into())
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_3(census: &Census, dir: &Path) -> Outcome {
    let input = dir.join("bricks.txt");
    let mut text = String::from("# emitted bricks, then the historical one\n");
    for r in &census.primitive {
        text += &tuple_text(&brick_tuple(r)[..3]);
        text.push('\n');
    }
    text += "44,117,240 125,267,244\n";
    fs::write(&input, text).unwrap();
    let o = brickscan(&["classify", "--in", input.to_str().unwrap(), "--json"]);
    ensure(code(&o) == 0, || format!("classify exit code {}: {}", code(&o), String::from_utf8_lossy(&o.stdout)))?;
    let rows: Vec<Value> = String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    ensure(rows.len() == 12, || format!("{} classified rows", rows.len()))?;
    for (row, rec) in rows.iter().zip(&census.primitive) {
        ensure(row["scale"] == 1, || format!("scale {} for {}", row["scale"], rec["n"]))?;
        ensure(row["witness"] == rec["witness"]["brick"], || {
            format!("n={}: classify {} vs search {}", rec["n"], row["witness"], rec["witness"]["brick"])
        })?;
    }
    let hist = &rows[11];
    let search117 = census.primitive.iter().find(|r| r["n"] == 117).unwrap();
    ensure(hist["witness"] == search117["witness"]["brick"], || format!("historical brick gave {}", hist["witness"]))?;
    ensure(hist["witness"]["brick_type"] == 2, || "historical brick not type 2".into())?;
    Ok("12/12 witnesses agree; (44,117,240) is n=117 type 2".into())
}

/// Even legs y of n² + y² = z², scanned with a rising z pointer.
fn brute_triple_count(n: u64) -> u64 {
    let n2 = n as u128 * n as u128;
    let y_max = (n2 - 1) / 2;
    let mut z = n as u128;
    let mut count = 0;
    let mut y = 2u128;
    while y <= y_max {
        let target = n2 + y * y;
        while z * z < target {
            z += 1;
        }
        if z * z == target {
            count += 1;
        }
        y += 2;
    }
    count
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in (3..=2001u64).step_by(2) {
        let formula = count_triples_odd_edge(&factorize(n).unwrap()).unwrap();
        let brute = brute_triple_count(n);
        ensure(formula == brute, || format!("n={n}: formula {formula}, enumeration {brute}"))?;
        checked += 1;
    }
    let cli = brickscan(&["triples", "--n", "2001", "--count-only"]);
    let printed = String::from_utf8_lossy(&cli.stdout).trim().to_owned();
    ensure(printed == brute_triple_count(2001).to_string(), || format!("CLI count for 2001 printed {printed}"))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("{checked} odd n agree in {:.1}s", took.as_secs_f64()))
}

fn brute_reps(n: u64) -> Vec<DiffSquareRep> {
    let mut out = Vec::new();
    for t in (1..=n).filter(|t| n % t == 0) {
        let m = n / t;
        let mut f = 1u64;
        while 2 * f < m {
            let mut e = f + 1;
            while e * e - f * f <= m {
                if e * e - f * f == m && gcd(e, f) == 1 {
                    out.push(DiffSquareRep { t, e, f });
                }
                e += 1;
            }
            f += 1;
        }
    }
    out.sort_by_key(|r| (r.t, r.e));
    out
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for n in (3..=10_000u64).step_by(2) {
        let got = diff_square_reps(n).unwrap();
        let want = brute_reps(n);
        ensure(got == want, || format!("n={n}: {got:?} vs oracle {want:?}"))?;
        total += got.len();
    }
    Ok(format!("{total} representations over odd n <= 10000 in {:.1}s", start.elapsed().as_secs_f64()))
}

fn criterion_6(dir: &Path) -> Outcome {
    let out = dir.join("cuboids.jsonl");
    let start = Instant::now();
    let o = brickscan(&["search-cuboids", "--min", "3", "--max", "99999", "--conjectures", "1,2,3,4,5,6", "--out", out.to_str().unwrap()]);
    let took = start.elapsed();
    ensure(code(&o) == 0, || format!("scan exit code {}", code(&o)))?;
    let hits = jsonl(&out);
    ensure(hits.is_empty(), || format!("{} hits (ANOMALY): {:?}", hits.len(), hits.first()))?;

    // A forged witness: three genuine representations of 1105 with no certificate.
    let n = 1105;
    let reps = diff_square_reps(n).unwrap();
    let forged = CuboidWitness::canonical(n, reps[0], reps[1], reps[2]);
    ensure(!forged.certificate_holds().unwrap(), || "forged certificate holds".into())?;
    ensure(!verify_perfect_cuboid(&build_perfect_cuboid(&forged)).is_valid(), || "forged solid verifies".into())?;
    ensure(HitRecord::cuboid(forged, "forged").is_err(), || "forged witness became a record".into())?;

    let o = brickscan(&["verify", "--cuboid", "104,153,672,185,680,685,697"]);
    ensure(code(&o) == 2, || format!("verify of a near-miss exited {}", code(&o)))?;

    // Anything flagged as an anomaly must drive the exit code to 3.
    let mut rec: HitRecord = serde_json::from_value(census_record()).unwrap();
    rec.anomaly = true;
    let mut s = Summary::default();
    s.absorb(&[rec]);
    ensure(s.exit_code() == 3, || format!("anomaly summary exits {}", s.exit_code()))?;
    Ok(format!("0 hits below 1e5 in {:.1}s; forged witness rejected; anomaly exit 3", took.as_secs_f64()))
}

fn census_record() -> Value {
    let o = brickscan(&["search-bricks", "--min", "85", "--max", "85"]);
    serde_json::from_slice(String::from_utf8_lossy(&o.stdout).lines().next().unwrap().as_bytes()).unwrap()
}

type BiquadKey = (u64, u64, u64, u64, u64, u64, u64);

fn biquad_oracle(family: u8, bound: u64, scale_bound: u64) -> BTreeSet<BiquadKey> {
    let odd: Vec<u64> = (3..=bound).step_by(2).collect();
    let scaled: Vec<u64> = (3..=scale_bound).step_by(2).collect();
    let (left, right): (Vec<u64>, Vec<u64>) = match family {
        1 => (vec![1], vec![1]),
        2 => (vec![1], scaled),
        _ => (scaled.clone(), scaled),
    };
    let p4 = |x: u64| (x as u128).pow(4);
    let mut out = BTreeSet::new();
    for &a in &left {
        for &b in &right {
            for &p in &odd {
                for &q in &odd {
                    for &r in &odd {
                        for &s in &odd {
                            if p > q || r > s || gcd(p, q) != 1 || gcd(r, s) != 1 {
                                continue;
                            }
                            let total = (a * a) as u128 * (p4(p) + p4(q)) + (b * b) as u128 * (p4(r) + p4(s));
                            let Some(t) = exact_sqrt(total) else { continue };
                            let mut key = ((a, p, q), (b, r, s));
                            if family != 2 && key.0 > key.1 {
                                key = (key.1, key.0);
                            }
                            out.insert((key.0 .0, key.0 .1, key.0 .2, key.1 .0, key.1 .1, key.1 .2, t as u64));
                        }
                    }
                }
            }
        }
    }
    out
}

fn criterion_7(dir: &Path) -> Outcome {
    let start = Instant::now();
    let mut sizes = Vec::new();
    for (family, bound, scale) in [(1u8, 60u64, 9u64), (2, 40, 9), (3, 40, 9)] {
        let out = dir.join(format!("biquad{family}.jsonl"));
        let o = brickscan(&[
            "search-biquad", "--conjecture", &family.to_string(), "--bound", &bound.to_string(),
            "--scale-bound", &scale.to_string(), "--out", out.to_str().unwrap(),
        ]);
        ensure(matches!(code(&o), 0 | 3), || format!("family {family} exit code {}", code(&o)))?;
        let recs = jsonl(&out);
        let got: BTreeSet<BiquadKey> = recs
            .iter()
            .map(|r| {
                let h = &r["witness"]["biquad"];
                let f = |k: &str| h[k].as_u64().unwrap();
                (f("scale_pq"), f("p"), f("q"), f("scale_rs"), f("r"), f("s"), f("t"))
            })
            .collect();
        ensure(got.len() == recs.len(), || format!("family {family}: duplicate records"))?;
        let want = biquad_oracle(family, bound, scale);
        ensure(got == want, || {
            format!(
                "family {family}: only search {:?}; only oracle {:?}",
                got.difference(&want).collect::<Vec<_>>(),
                want.difference(&got).collect::<Vec<_>>()
            )
        })?;
        sizes.push(got.len());
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("hit sets {sizes:?} equal the oracle in {:.1}s", took.as_secs_f64()))
}

fn sorted_lines(text: &str) -> Vec<&str> {
    let mut v: Vec<&str> = text.lines().collect();
    v.sort_unstable();
    v
}

fn criterion_8(dir: &Path) -> Outcome {
    let full = dir.join("full.jsonl");
    let o = brickscan(&["search-bricks", "--min", "3", "--max", "999", "--out", full.to_str().unwrap()]);
    ensure(code(&o) == 0, || "unsharded run failed".into())?;
    let full_text = fs::read_to_string(&full).unwrap();

    let mut union = String::new();
    for i in 0..4 {
        let p = dir.join(format!("shard{i}.jsonl"));
        let shard = format!("{i}/4");
        let o = brickscan(&["search-bricks", "--min", "3", "--max", "999", "--shard", &shard, "--out", p.to_str().unwrap()]);
        ensure(code(&o) == 0, || format!("shard {shard} failed"))?;
        union += &fs::read_to_string(&p).unwrap();
    }
    ensure(sorted_lines(&union) == sorted_lines(&full_text), || "sorted shard union differs".into())?;

    let part = dir.join("part.jsonl");
    let ck = dir.join("part.ck.json");
    let base = ["search-bricks", "--min", "3", "--max", "999", "--stride", "16", "--out", part.to_str().unwrap(), "--checkpoint", ck.to_str().unwrap()];
    let o = brickscan(&[&base[..], &["--stop-after", "499"]].concat());
    ensure(code(&o) == 0, || format!("interrupted run exited {}", code(&o)))?;
    let ck_json: Value = serde_json::from_str(&fs::read_to_string(&ck).unwrap()).unwrap();
    let stopped = ck_json["last_completed_n"].as_u64().unwrap();
    ensure((499..999).contains(&stopped), || format!("checkpoint at {stopped}"))?;
    let o = brickscan(&[&base[..], &["--resume"]].concat());
    ensure(code(&o) == 0, || format!("resume exited {}: {}", code(&o), String::from_utf8_lossy(&o.stderr)))?;
    ensure(fs::read(&part).unwrap() == full_text.as_bytes(), || "resumed output differs".into())?;

    let o = brickscan(&[&base[..], &["--resume", "--strict"]].concat());
    ensure(code(&o) == 1, || "resume with a different config was not refused".into())?;
    Ok(format!("4-way union equals unsharded; resume from n={stopped} byte-identical"))
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    match census_scan(dir.path()) {
        Ok((census, took)) => {
            results.push((1, "census reproduction", criterion_1(&census, took)));
            results.push((2, "witness fidelity", criterion_2(&census)));
            results.push((3, "classifier agreement", criterion_3(&census, dir.path())));
        }
        Err(e) => {
            for (i, name) in [(1, "census reproduction"), (2, "witness fidelity"), (3, "classifier agreement")] {
                results.push((i, name, Err(format!("census scan failed: {e}"))));
            }
        }
    }
    results.push((4, "count-formula oracle", criterion_4()));
    results.push((5, "representation completeness", criterion_5()));
    results.push((6, "perfect-cuboid scan", criterion_6(dir.path())));
    results.push((7, "biquadratic oracle equivalence", criterion_7(dir.path())));
    results.push((8, "determinism and sharding", criterion_8(dir.path())));

    let mut failed = 0;
    for (i, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {i} ({name}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {i} ({name}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
