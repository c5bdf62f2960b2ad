//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails or overruns its time budget.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use tanglescope::duality::{f_prime_tangles, max_supported_resolution, verify_duality};
use tanglescope::fixtures;
use tanglescope::profiles::{distinguishes, enumerate_profiles, ProfileAtlas};
use tanglescope::treeset::{build_distinguishing_tree_set, maximal_profiles, verify_tree_set};
use tanglescope::{Canvas, Picture, PixelSet, Pool, PoolOptions, Profile, WeightedCanvas};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pool_of(wc: WeightedCanvas) -> Arc<Pool> {
    Pool::build(Arc::new(wc), PoolOptions::exact_with_cap(fixtures::MINI_L_CAP)).unwrap()
}

fn random_picture(rng: &mut StdRng, w: usize, h: usize, n: usize) -> WeightedCanvas {
    let values = (0..w * h).map(|_| rng.gen_range(0..1u64 << n)).collect();
    let pic = Picture::new(Canvas::grid(w, h).unwrap(), n, values).unwrap();
    WeightedCanvas::with_suggested_offset(pic)
}

fn submodularity() -> Check {
    let mut pairs = 0u64;
    for (name, wc) in fixtures::small_fixtures() {
        let n = wc.pixel_count();
        if n > 9 {
            continue;
        }
        let table: Vec<u64> = (0..1u32 << n).map(|s| wc.order(PixelSet(s))).collect();
        for (s, &o) in table.iter().enumerate() {
            ensure(o == naive_order(&wc, s as u32), || format!("{name}: order of {s:#x}"))?;
        }
        for a in 0..table.len() {
            for b in 0..table.len() {
                ensure(table[a & b] + table[a | b] <= table[a] + table[b], || {
                    format!("{name}: violated at {a:#x}, {b:#x}")
                })?;
            }
        }
        pairs += (table.len() * table.len()) as u64;
    }
    let mut rng = StdRng::seed_from_u64(7);
    let mut big = vec![
        ("quad4x4", fixtures::quad4x4()),
        ("checker4x4", fixtures::checker4x4()),
        ("noisedisc4x4", fixtures::noise_disc4x4()),
    ];
    big.push(("random4x4", random_picture(&mut rng, 4, 4, 3)));
    big.push(("random5x4", random_picture(&mut rng, 5, 4, 2)));
    big.push(("random4x5", random_picture(&mut rng, 4, 5, 1)));
    let mut sampled = 0u64;
    for (name, wc) in &big {
        let full = full_mask(wc);
        for _ in 0..10_000 {
            let (a, b) = (rng.gen::<u32>() & full, rng.gen::<u32>() & full);
            let o = |s: u32| {
                let v = wc.order(PixelSet(s));
                assert_eq!(v, naive_order(wc, s), "{name}: order of {s:#x}");
                v
            };
            ensure(o(a & b) + o(a | b) <= o(a) + o(b), || {
                format!("{name}: violated at {a:#x}, {b:#x}")
            })?;
        }
        sampled += 10_000;
    }
    Ok(format!("{pairs} exhaustive pairs, {sampled} sampled pairs on 16-20 px, 0 violations"))
}

fn letter_l() -> Check {
    let wc = fixtures::mini_l();
    let figure = fixtures::mini_l_figure();
    ensure(wc.offset() == 1, || "N is not 1".into())?;
    let table = canonical_order_table(&wc);
    let zero: Vec<u32> = (1..table.len())
        .filter(|&i| table[i] == 0)
        .map(|i| (i as u32) << 1)
        .collect();
    ensure(zero == vec![figure.bits()], || format!("order-0 lines {zero:x?}"))?;

    let pool = pool_of(wc);
    ensure(pool.layer(0) == [PixelSet::EMPTY, figure], || "pool disagrees".into())?;
    let atlas = ProfileAtlas::build(&pool);
    let regions = atlas.regions();
    let low: Vec<_> = regions.iter().filter(|r| r.complexity() == 1).collect();
    ensure(low.len() == 2, || format!("{} regions of complexity 1", low.len()))?;
    ensure(
        distinguishes(figure, low[0].representative(), low[1].representative()),
        || "the L does not separate them".into(),
    )?;
    let naive = naive_profiles(pool.canvas(), 1, &[0, figure.bits()]);
    ensure(naive.len() == 2, || "brute force finds other 1-profiles".into())?;
    Ok(format!(
        "unique order-0 line is the L among {} lines; {} regions, 2 of complexity 1",
        table.len() - 1,
        regions.len()
    ))
}

/// Minimum order of a line distinguishing `p` and `q`, by a full scan.
fn brute_min_distinguisher(p: &Profile, q: &Profile, table: &[u64], full: u32) -> Option<u64> {
    let k = p.k().min(q.k());
    (1..table.len())
        .filter(|&i| table[i] < k)
        .filter(|&i| {
            let a = PixelSet((i as u32) << 1);
            let b = PixelSet(full & !((i as u32) << 1));
            (p.contains(a) && q.contains(b)) || (p.contains(b) && q.contains(a))
        })
        .map(|i| table[i])
        .min()
}

fn check_family(name: &str, family: &[Profile], table: &[u64]) -> std::result::Result<usize, String> {
    let t = build_distinguishing_tree_set(family).map_err(|e| format!("{name}: {e}"))?;
    let report = verify_tree_set(&t, family);
    ensure(report.all(), || format!("{name}: {report:?}"))?;
    let full = full_mask(family[0].pool().canvas());
    let sides: Vec<u32> = t.lines().iter().map(|l| l.side().bits()).collect();
    for &a in &sides {
        for &b in &sides {
            ensure(nested(a, b, full), || format!("{name}: {a:#x} crosses {b:#x}"))?;
        }
    }
    let separates = |s: u32, p: &Profile, q: &Profile| {
        let (a, b) = (PixelSet(s), PixelSet(full & !s));
        (p.contains(a) && q.contains(b)) || (p.contains(b) && q.contains(a))
    };
    for (i, p) in family.iter().enumerate() {
        for q in &family[i + 1..] {
            let best = brute_min_distinguisher(p, q, table, full)
                .ok_or_else(|| format!("{name}: indistinguishable pair"))?;
            let in_t = t
                .lines()
                .iter()
                .filter(|l| separates(l.side().bits(), p, q))
                .map(|l| l.order())
                .min();
            ensure(in_t == Some(best), || {
                format!("{name}: best {best}, tree set {in_t:?}")
            })?;
        }
    }
    for skip in 0..sides.len() {
        let broken = family.iter().enumerate().any(|(i, p)| {
            family[i + 1..].iter().any(|q| {
                !sides
                    .iter()
                    .enumerate()
                    .any(|(j, &s)| j != skip && separates(s, p, q))
            })
        });
        ensure(broken, || format!("{name}: line {:#x} is redundant", sides[skip]))?;
    }
    let consistent = (0u32..1 << sides.len())
        .filter(|bits| {
            let chosen: Vec<u32> = sides
                .iter()
                .enumerate()
                .map(|(i, &s)| if (bits >> i) & 1 == 1 { s } else { full & !s })
                .collect();
            naive_consistent(&chosen, full)
        })
        .count();
    let mut images: Vec<Vec<u32>> = family
        .iter()
        .map(|p| {
            sides
                .iter()
                .map(|&s| if p.contains(PixelSet(s)) { s } else { full & !s })
                .collect()
        })
        .collect();
    for img in &images {
        ensure(naive_consistent(img, full), || format!("{name}: inconsistent image"))?;
    }
    images.sort();
    images.dedup();
    ensure(consistent == family.len() && images.len() == family.len(), || {
        format!("{name}: {consistent} orientations, {} images", images.len())
    })?;
    Ok(t.len())
}

fn quadrant_profiles(atlas: &ProfileAtlas, k: u64) -> Vec<Profile> {
    atlas
        .level(k)
        .iter()
        .filter(|p| p.kernel().len() == 4)
        .cloned()
        .collect()
}

fn tree_sets() -> Check {
    let mut summary = Vec::new();
    for (name, wc) in [
        ("mono2x2", fixtures::mono2x2()),
        ("miniL", fixtures::mini_l()),
        ("quad4x4", fixtures::quad4x4()),
    ] {
        let table = canonical_order_table(&wc);
        let pool = pool_of(wc);
        let atlas = ProfileAtlas::build(&pool);
        let mut families = vec![
            ("1-profiles", atlas.level(1).to_vec()),
            ("maximal", maximal_profiles(&atlas)),
        ];
        if name == "quad4x4" {
            families.push(("quadrants", quadrant_profiles(&atlas, 3)));
        }
        for (label, family) in families {
            let n = check_family(&format!("{name}/{label}"), &family, &table)?;
            summary.push(format!("{name}/{label} |P|={} |T|={n}", family.len()));
        }
    }
    Ok(summary.join(", "))
}

fn quadrants() -> Check {
    let wc = fixtures::quad4x4();
    let table = canonical_order_table(&wc);
    let full = full_mask(&wc);
    let pool = pool_of(wc);
    let atlas = ProfileAtlas::build(&pool);
    let family = quadrant_profiles(&atlas, 3);
    ensure(family.len() == 4, || format!("{} quadrant profiles", family.len()))?;
    let t = build_distinguishing_tree_set(&family).map_err(|e| e.to_string())?;
    ensure(t.len() == 3, || format!("|T| = {}", t.len()))?;
    let right = fixtures::quadrant(false, true).union(fixtures::quadrant(true, true)).bits();
    let left = full & !right;
    let sides: Vec<u32> = t.lines().iter().map(|l| l.side().bits()).collect();
    ensure(sides.contains(&right), || "no vertical mid-line".into())?;
    let inside = |s: u32, half: u32| s & !half == 0 || (full & !s) & !half == 0;
    let per_half = |half: u32| sides.iter().filter(|&&s| s != right && inside(s, half)).count();
    ensure(per_half(left) == 1 && per_half(right) == 1, || {
        format!("lines per half: {} and {}", per_half(left), per_half(right))
    })?;

    let mut scanned = 0;
    for k in [3, 4] {
        let family = quadrant_profiles(&atlas, k);
        let pair_bits = |s: u32| {
            let mut bits = 0u32;
            let mut bit = 0;
            for (i, p) in family.iter().enumerate() {
                for q in &family[i + 1..] {
                    let (a, b) = (PixelSet(s), PixelSet(full & !s));
                    if (p.contains(a) && q.contains(b)) || (p.contains(b) && q.contains(a)) {
                        bits |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            bits
        };
        let masks: Vec<u32> = (1..table.len())
            .filter(|&i| table[i] < k)
            .map(|i| pair_bits((i as u32) << 1))
            .collect();
        scanned += masks.len();
        for (i, &a) in masks.iter().enumerate() {
            for &b in &masks[i..] {
                ensure(a | b != 0b11_1111, || format!("two lines suffice at k = {k}"))?;
            }
        }
    }
    Ok(format!(
        "|T| = 3 (mid-line plus one per half); no 2 of {scanned} candidate lines separate all quadrants"
    ))
}

fn validate_tangle(wc: &WeightedCanvas, k: u64, p: &Profile) -> std::result::Result<(), String> {
    let full = full_mask(wc);
    let chosen = members(p);
    let mut canon: Vec<u32> = chosen
        .iter()
        .map(|&s| if s & 1 == 1 { full & !s } else { s })
        .collect();
    canon.sort_unstable();
    let mut pairs = naive_pairs(wc, k);
    pairs.sort_unstable();
    ensure(canon == pairs, || "not an orientation of the stratum".into())?;
    ensure(naive_consistent(&chosen, full), || "inconsistent".into())?;
    ensure(avoids_small_void_stars(&chosen, full), || "contains a forbidden star".into())
}

fn validate_chop(
    wc: &WeightedCanvas,
    k: u64,
    tree: &tanglescope::duality::ChopTree,
) -> std::result::Result<(), String> {
    let full = full_mask(wc);
    let mut leaves = tree.leaves();
    leaves.sort_unstable();
    ensure(leaves == (0..wc.pixel_count()).collect::<Vec<_>>(), || {
        format!("leaves {leaves:?}")
    })?;
    let lines: Vec<u32> = tree.lines().iter().map(|s| s.bits()).collect();
    for &a in &lines {
        ensure(naive_order(wc, a) < k, || format!("line {a:#x} too costly"))?;
        for &b in &lines {
            ensure(nested(a, b, full), || format!("{a:#x} crosses {b:#x}"))?;
        }
    }
    for star in tree.splitting_stars() {
        let e: Vec<u32> = star.elements().iter().map(|s| s.bits()).collect();
        let ok = match e.as_slice() {
            [p] => p.count_ones() == 1 && naive_order(wc, *p) < k,
            [a, b, c] => {
                a | b == full
                    && a | c == full
                    && b | c == full
                    && a & b & c == 0
                    && e.iter().all(|&s| naive_order(wc, s) < k)
            }
            _ => false,
        };
        ensure(ok, || format!("bad splitting star {e:x?}"))?;
    }
    Ok(())
}

fn dichotomy() -> Check {
    let mut cases = 0;
    let (mut tangles, mut trees) = (0, 0);
    for (name, wc) in fixtures::small_fixtures() {
        let pool = pool_of(wc.clone());
        for k in 1..=pool.top_level() {
            let r = verify_duality(&pool, k).map_err(|e| format!("{name} k={k}: {e}"))?;
            ensure(r.holds(), || format!("{name} k={k}: {r:?}"))?;
            match (&r.tangle, &r.chop_tree) {
                (Some(t), None) => {
                    validate_tangle(&wc, k, t).map_err(|e| format!("{name} k={k}: {e}"))?;
                    tangles += 1;
                }
                (None, Some(c)) => {
                    validate_chop(&wc, k, c).map_err(|e| format!("{name} k={k}: {e}"))?;
                    trees += 1;
                }
                _ => return Err(format!("{name} k={k}: not exactly one witness")),
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (fixture, k) cases: {tangles} tangles, {trees} chop trees, 0 exceptions"))
}

fn resolution() -> Check {
    let mono = fixtures::mono2x2();
    let r = max_supported_resolution(&mono, None).map_err(|e| e.to_string())?;
    ensure(r == 2, || format!("mono2x2 resolution {r}"))?;
    let top = (0..16).map(|s| naive_order(&mono, s)).max().unwrap_or(0) + 1;
    let brute = (1..=top)
        .filter(|&k| {
            let pairs = naive_pairs(&mono, k);
            naive_profiles(&mono, k, &pairs)
                .iter()
                .any(|p| p.iter().all(|s| s.count_ones() != 1))
        })
        .max()
        .unwrap_or(0);
    ensure(brute == 2, || format!("brute force says {brute}"))?;
    let noise = fixtures::noise_disc4x4();
    let block = max_supported_resolution(&noise, Some(fixtures::noise_disc_block()))
        .map_err(|e| e.to_string())?;
    let ring = max_supported_resolution(&noise, Some(fixtures::noise_disc_ring()))
        .map_err(|e| e.to_string())?;
    ensure(block > ring, || format!("block {block}, ring {ring}"))?;
    Ok(format!(
        "mono2x2 = 2; noisedisc4x4 block = {block} > ring = {ring} (seed {})",
        fixtures::NOISE_SEED
    ))
}

fn violating_star_tangles() -> Check {
    let mut total = 0;
    for (name, wc) in [("mono2x2", fixtures::mono2x2()), ("miniL", fixtures::mini_l())] {
        let pool = pool_of(wc);
        for k in 1..=pool.top_level() {
            let s = pool.stratum(k).unwrap();
            // Profiles compare by their canonical body, not by sides lists
            // that run into the millions at high k.
            let a = enumerate_profiles(&s);
            let b = f_prime_tangles(&s);
            ensure(a == b, || format!("{name} k={k}: {} profiles, {} tangles", a.len(), b.len()))?;
            total += a.len();
        }
    }
    Ok(format!("{total} profiles matched across every k"))
}

/// Canonical dump of every small stratum, checked against brute force.
fn oracle_dump() -> std::result::Result<(String, usize), String> {
    let mut all = fixtures::small_fixtures();
    all.push(("quad4x4", fixtures::quad4x4()));
    all.push(("noisedisc4x4", fixtures::noise_disc4x4()));
    all.push(("checker4x4", fixtures::checker4x4()));
    all.push(("miniL", fixtures::mini_l()));
    let mut out = String::new();
    let mut strata = 0;
    for (name, wc) in all {
        let table = canonical_order_table(&wc);
        let pool = pool_of(wc.clone());
        for k in 1..=pool.top_level() {
            let s = pool.stratum(k).unwrap();
            if s.pair_count() > 12 {
                continue;
            }
            let mut pairs: Vec<(u64, u32)> = (0..table.len())
                .filter(|&i| table[i] < k)
                .map(|i| (table[i], (i as u32) << 1))
                .collect();
            pairs.sort_unstable();
            let pairs: Vec<u32> = pairs.into_iter().map(|(_, s)| s).collect();
            let lib_pairs: Vec<u32> = s.pairs().map(|p| p.bits()).collect();
            ensure(pairs == lib_pairs, || format!("{name} k={k}: stratum differs"))?;
            let naive = naive_profiles(&wc, k, &pairs);
            let found: Vec<Vec<u32>> = enumerate_profiles(&s).iter().map(members).collect();
            ensure(naive == found, || {
                format!("{name} k={k}: brute force {} vs {}", naive.len(), found.len())
            })?;
            for p in &found {
                let hex: Vec<String> = p.iter().map(|s| format!("{s:x}")).collect();
                out.push_str(&format!("{name} {k} {}\n", hex.join(",")));
            }
            strata += 1;
        }
    }
    Ok((out, strata))
}

fn oracle_equivalence() -> Check {
    let (first, strata) = oracle_dump()?;
    let (second, _) = oracle_dump()?;
    ensure(first == second, || "canonical output differs between runs".into())?;
    Ok(format!(
        "{strata} strata match brute force; {} bytes identical across two runs",
        first.len()
    ))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Option<u64>, fn() -> Check);
    let criteria: [Criterion; 8] = [
        (1, "submodularity of the order function", Some(10), submodularity),
        (2, "letter L: unique order-0 line, two complexity-1 regions", Some(60), letter_l),
        (3, "distinguishing tree sets verify", Some(120), tree_sets),
        (4, "quadrant tree set has three lines", None, quadrants),
        (5, "tangle / chop tree dichotomy", Some(300), dichotomy),
        (6, "supported resolution", None, resolution),
        (7, "profiles equal tangles of the violating stars", None, violating_star_tangles),
        (8, "enumeration matches brute force, deterministic", None, oracle_equivalence),
    ];
    let mut failed = 0;
    for (id, title, budget, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|e| Err(format!("panicked: {e:?}")));
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|s| elapsed > Duration::from_secs(s));
        let (verdict, detail) = match outcome {
            Ok(d) if !over => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {}s budget", budget.unwrap())),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} [{id}] {title}: {detail} ({:.2}s)", elapsed.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
