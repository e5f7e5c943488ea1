//! Acceptance suite: one line per criterion, with its time limit.
//! Golden files live in tests/golden; set UPDATE_GOLDEN=1 to rewrite them.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tlmix_core::cellmod::{self, LeafFamily};
use tlmix_core::diagram::{compose_filtered, enumerate_diagrams, Morphism};
use tlmix_core::jw::checks::{self, CellProbe};
use tlmix_core::jw::dense::mixed_jw_locality;
use tlmix_core::ring::FpPoint;
use tlmix_core::{digits, jantzen, oracle, qnum, structure, IntPoly, MixedChar};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chi(ell: u64, p: u64) -> MixedChar {
    MixedChar::new(ell, p).expect("valid characteristic")
}

fn e<E: std::fmt::Debug>(x: E) -> String {
    format!("{x:?}")
}

fn quantum_arithmetic() -> Check {
    let five = qnum::quantum(5);
    ensure(five == IntPoly::from_i64s(&[1, 0, -3, 0, 1]), || format!("[5] = {five}"))?;
    let f = IntPoly::from_i64s(&[-1, 1, 1]).mul(&IntPoly::from_i64s(&[-1, -1, 1]));
    ensure(five == f, || "[5] does not factor as (δ²+δ−1)(δ²−δ−1)".into())?;
    for n in 1..=50u64 {
        let mut prod = IntPoly::one();
        for k in (3..=2 * n).filter(|k| (2 * n) % k == 0) {
            prod = prod.mul(&qnum::psi(k));
        }
        ensure(prod == qnum::quantum(n as i64), || format!("[{n}] ≠ ∏ψ_k"))?;
    }
    Ok(())
}

fn digits_suite() -> Check {
    let c = chi(5, 3);
    let ex = digits::expand(685, &c);
    ensure(ex.to_string() == "[1,2,0,0,2,1]", || format!("expand(685) = {ex}"))?;
    let anc = digits::ancestors(685, &c);
    ensure(anc == vec![684, 674, 404], || format!("ancestors {anc:?}"))?;
    let supp = digits::support(685, &c);
    ensure(supp == vec![685, 683, 665, 663, 145, 143, 125, 123], || format!("support {supp:?}"))?;
    let down: BTreeSet<Vec<u32>> =
        digits::down_admissible_sets(685, &c).into_iter().map(|s| s.indices).filter(|s| !s.is_empty()).collect();
    let want: BTreeSet<Vec<u32>> =
        [vec![0], vec![4], vec![0, 4], vec![1, 2, 3], vec![0, 1, 2, 3], vec![1, 2, 3, 4], vec![0, 1, 2, 3, 4]]
            .into_iter()
            .collect();
    ensure(down == want, || format!("down sets {down:?}"))?;
    let up = digits::up_admissible_sets(123, 100_000, &c);
    let of = |k: usize| -> Vec<Vec<u32>> { up.iter().filter(|s| s.len() == k).map(|s| s.indices.clone()).collect() };
    ensure(of(1) == vec![vec![0], vec![3]], || format!("size-1 up sets {:?}", of(1)))?;
    ensure(of(2) == vec![vec![0, 3], vec![2, 3], vec![3, 4]], || format!("size-2 up sets {:?}", of(2)))?;
    Ok(())
}

fn alperin_diagrams() -> Check {
    let c = chi(5, 3);
    let lat = structure::submodule_lattice(267, 21, &c).map_err(e)?;
    let mut f = lat.factors();
    f.sort_unstable();
    ensure(f == vec![21, 27, 37, 41, 67, 71, 81, 87, 247, 251, 261, 267], || format!("nodes {f:?}"))?;
    let edges: BTreeSet<(u64, u64)> = lat.factor_edges().into_iter().collect();
    let want: BTreeSet<(u64, u64)> = [
        (21, 41), (21, 27), (21, 81), (41, 37), (41, 71), (27, 37), (27, 87), (81, 71), (81, 87), (81, 261),
        (37, 67), (71, 67), (71, 251), (87, 67), (87, 267), (261, 251), (261, 267), (67, 247), (251, 247), (267, 247),
    ]
    .into_iter()
    .collect();
    ensure(edges == want && lat.covers.len() == 20, || format!("edges {edges:?}"))?;
    let small = structure::truncate(&lat, 71, &c).map_err(e)?;
    let edges: BTreeSet<(u64, u64)> = small.factor_edges().into_iter().collect();
    let want: BTreeSet<(u64, u64)> =
        [(21, 41), (21, 27), (41, 37), (41, 71), (27, 37), (37, 67), (71, 67)].into_iter().collect();
    ensure(small.nodes.len() == 6 && edges == want, || format!("truncation {edges:?}"))?;
    Ok(())
}

fn composition_factors() -> Check {
    let c = chi(3, 2);
    let got: BTreeSet<(u64, Vec<u32>)> =
        cellmod::composition_factors(200, 18, &c).map_err(e)?.into_iter().map(|(t, s)| (t, s.indices)).collect();
    let want: BTreeSet<(u64, Vec<u32>)> = [
        (18, vec![]),
        (22, vec![0]),
        (42, vec![3]),
        (46, vec![0, 3]),
        (30, vec![2, 3]),
        (90, vec![3, 4]),
        (34, vec![0, 2, 3]),
        (94, vec![0, 3, 4]),
        (78, vec![2, 3, 4]),
        (186, vec![3, 4, 5]),
        (28, vec![0, 1, 2, 3]),
        (82, vec![0, 2, 3, 4]),
        (190, vec![0, 3, 4, 5]),
        (174, vec![2, 3, 4, 5]),
        (76, vec![0, 1, 2, 3, 4]),
        (178, vec![0, 2, 3, 4, 5]),
        (172, vec![0, 1, 2, 3, 4, 5]),
    ]
    .into_iter()
    .collect();
    ensure(got == want, || format!("W_200(18) factors {got:?}"))?;
    let lat = structure::submodule_lattice(200, 18, &c).map_err(e)?;
    ensure(lat.covers.len() == 28, || format!("W_200(18) has {} covers", lat.covers.len()))?;
    let n = cellmod::composition_factors(10000, 18, &c).map_err(e)?.len();
    ensure(n == 42, || format!("W_10000(18) has {n} factors"))
}

fn xi_values() -> Check {
    let c = chi(3, 2);
    for (s, v) in [(vec![0, 1, 2, 3, 4, 5], 64), (vec![0, 2, 3, 4, 5], 62), (vec![2, 3, 4, 5], 60)] {
        let got = jantzen::xi_closed_form(1, &s, &c).map_err(e)?;
        ensure(got == v, || format!("ξ_1({s:?}) = {got}"))?;
    }
    let t = jantzen::xi_table(200, 18, &c).map_err(e)?;
    let h = |f: u64| t.rows.iter().find(|r| r.factor == f).map(|r| (r.heights.clone(), r.stable));
    ensure(h(22) == Some((vec![2, 1], 1)), || format!("staircase 22: {:?}", h(22)))?;
    ensure(h(42) == Some((vec![8, 0], 0)), || format!("staircase 42: {:?}", h(42)))?;
    let mut checked = 0usize;
    for c in [chi(3, 2), chi(2, 3), chi(5, 3), chi(4, 3)] {
        let mut o = jantzen::XiOracle::new(&c, 8).map_err(e)?;
        for m in 0..=200u64 {
            for s in digits::up_admissible_sets(m, 2000, &c) {
                let got = o.profile(&s.indices).map_err(e)?;
                for i in 1..=8u32 {
                    let want = jantzen::xi_closed_form(i, &s.indices, &c).map_err(e)?;
                    ensure(got[i as usize - 1] == want, || {
                        format!("{c}: m={m} S={s} i={i}: oracle {} closed form {want}", got[i as usize - 1])
                    })?;
                    checked += 1;
                }
            }
        }
    }
    ensure(checked > 0, || "nothing checked".into())
}

fn gamma_agreement() -> Check {
    for c in [chi(3, 2), chi(2, 3)] {
        for m in 0..=14u64 {
            for s in digits::up_admissible_sets(m, 14, &c) {
                let d = jantzen::gamma_diagrammatic(m, &s.indices, &c).map_err(e)?;
                let g = jantzen::gamma_ratio(m, &s.indices, &c).map_err(e)?.to_ratfunc();
                ensure(d == g, || format!("{c}: m={m} S={s}: diagrams {d}, formula {g}"))?;
            }
        }
    }
    Ok(())
}

fn jw_properties() -> Check {
    for n in 1..=10 {
        let bad = checks::classical_exact(n).map_err(e)?;
        ensure(bad.is_empty(), || format!("jw_{n}: {bad:?}"))?;
        let bad = checks::absorption_exact(n).map_err(e)?;
        ensure(bad.is_empty(), || format!("jw_{n}: {bad:?}"))?;
    }
    let c = chi(3, 2);
    for n in 1..=14u64 {
        let probe = CellProbe::new(n as usize, 11);
        let bad = checks::mixed_idempotent(n, &c, &probe).map_err(e)?;
        ensure(bad.is_empty(), || format!("JW_{n}: {bad:?}"))?;
        let r = mixed_jw_locality(n, &c).map_err(e)?;
        ensure(r.is_local(), || format!("JW_{n} is not local at {:?}", r.offending))?;
        let (bad, _) = checks::shortening(n, 14, &c, 5).map_err(e)?;
        ensure(bad.is_empty(), || format!("shortening at {n}: {bad:?}"))?;
    }
    Ok(())
}

fn structure_oracle() -> Check {
    for c in [chi(3, 2), chi(2, 3)] {
        let zero_ok = c.ell != Some(2);
        for n in 0..=10usize {
            for m in (n % 2..=n).step_by(2) {
                if m == 0 && !zero_ok {
                    continue;
                }
                let bad = oracle::lattice_audit(n, m, &c).map_err(e)?;
                ensure(bad.is_empty(), || format!("{c}: {bad:?}"))?;
                let (ok, total) = cellmod::factor_dimension_check(n, m, &c).map_err(e)?;
                ensure(ok, || format!("{c}: W_{n}({m}) factor dimensions sum to {total}"))?;
                let f = cellmod::composition_factors(n as u64, m as u64, &c).map_err(e)?;
                let distinct: BTreeSet<u64> = f.iter().map(|x| x.0).collect();
                ensure(distinct.len() == f.len(), || format!("{c}: W_{n}({m}) repeats a factor"))?;
            }
        }
    }
    Ok(())
}

fn cellularity() -> Check {
    for c in [chi(3, 2), chi(2, 3)] {
        for n in 1..=8usize {
            for m in (n % 2..=n).step_by(2) {
                for fam in [LeafFamily::Classical, LeafFamily::Special] {
                    let ll = cellmod::light_leaves_basis(n, m, fam, &c).map_err(e)?;
                    ensure(ll.is_unitriangular().map_err(e)?, || format!("{c}: {fam:?} leaves of W_{n}({m})"))?;
                }
            }
        }
    }
    let pt = FpPoint::new(1_000_003, 7919);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8usize);
        let m = n % 2 + 2 * rng.gen_range(0..=n / 2);
        let b = cellmod::cell_basis(n, m).map_err(e)?;
        let all = enumerate_diagrams(n, n).map_err(e)?;
        let mut a = Morphism::zero(n, n);
        for _ in 0..3 {
            a.add_term(&pt, all[rng.gen_range(0..all.len())].clone(), &rng.gen_range(1..1_000_003));
        }
        let coords = |rng: &mut ChaCha8Rng| (0..b.len()).map(|_| rng.gen_range(0..1_000_003)).collect::<Vec<u64>>();
        let x = b.from_coords(&pt, &coords(&mut rng));
        let y = b.from_coords(&pt, &coords(&mut rng));
        let ax = compose_filtered(&pt, &a, &x, m).map_err(e)?;
        let ay = compose_filtered(&pt, &a.star(), &y, m).map_err(e)?;
        let l = cellmod::bilinear(&pt, &ax, &y).map_err(e)?;
        let r = cellmod::bilinear(&pt, &x, &ay).map_err(e)?;
        ensure(l == r, || format!("⟨ax, y⟩ ≠ ⟨x, a*y⟩ in W_{n}({m})"))?;
    }
    Ok(())
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn golden(name: &str, data: &str) -> Check {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).map_err(e)?;
        return std::fs::write(&path, data).map_err(e);
    }
    let old = std::fs::read_to_string(&path).map_err(|x| format!("{}: {x}; run with UPDATE_GOLDEN=1", path.display()))?;
    ensure(old == data, || format!("{name} differs from the golden file"))
}

fn stack_json() -> Result<String, String> {
    let t = jantzen::xi_table(10000, 18, &chi(3, 2)).map_err(e)?;
    let mut s = serde_json::to_string_pretty(&t).map_err(e)?;
    s.push('\n');
    Ok(s)
}

fn figure_data() -> Check {
    let c = chi(5, 3);
    let grid = digits::support_grid_csv(&c, 200);
    ensure(grid == digits::support_grid_csv(&c, 200), || "support grid is not deterministic".into())?;
    for (y, row) in digits::support_grid(&c, 200).iter().enumerate() {
        let supp: BTreeSet<u64> = digits::support(y as u64, &c).into_iter().collect();
        for (x, &b) in row.iter().enumerate() {
            ensure(b == supp.contains(&(x as u64)), || format!("grid cell ({x}, {y})"))?;
        }
    }
    golden("support_5_3_200.csv", &grid)?;
    let stack = stack_json()?;
    ensure(stack == stack_json()?, || "staircase stack is not deterministic".into())?;
    let t = jantzen::xi_table(10000, 18, &chi(3, 2)).map_err(e)?;
    ensure(t.rows.len() == 42, || format!("{} staircases", t.rows.len()))?;
    golden("staircases_10000_18.json", &stack)
}

fn main() {
    let suite: Vec<(u32, &str, u64, fn() -> Check)> = vec![
        (1, "quantum arithmetic", 1, quantum_arithmetic),
        (2, "digits", 1, digits_suite),
        (3, "Alperin diagrams", 1, alperin_diagrams),
        (4, "composition factors", 5, composition_factors),
        (5, "xi values", 120, xi_values),
        (6, "gamma agreement", 120, gamma_agreement),
        (7, "JW properties", 180, jw_properties),
        (8, "structure oracle", 300, structure_oracle),
        (9, "cellularity", 60, cellularity),
        (10, "figure data", 30, figure_data),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (id, name, limit, f) in suite {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let t0 = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let dt = t0.elapsed();
        let res = res.and_then(|()| ensure(dt <= Duration::from_secs(limit), || format!("took longer than {limit}s")));
        match res {
            Ok(()) => println!("PASS {id:>2} {name} ({:.2}s, limit {limit}s)", dt.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({:.2}s, limit {limit}s): {msg}", dt.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
