//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so every line is printed; the process fails if any criterion does.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use clap::Parser;
use intform::combinatorics::{
    b_composition_product, count_monomials, index_formula_corrected, index_formula_value,
    monomial_norm_product, n_exponent, n_exponent_literal, s_value, weight_vectors, WeightVector,
};
use intform::detengine::{det_al, det_al_closed, index_identity_check, ExponentMode, DEFAULT_BUDGET};
use intform::fock::{
    gram_matrix, monomial_basis, pair, scaled_block_index, scaled_weight_index, FockElement, FockMonomial,
};
use intform::lattice::IntegerLattice;
use intform::linalg::{bareiss_determinant, IntMatrix, RatMatrix};
use intform::schur::{index_a_over_b, index_a_over_b_in_basis, verify_b_subring_of_a};
use intform::voa::{voa_det_block_product, voa_det_closed, voa_full_gram};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn lat(name: &str) -> IntegerLattice {
    IntegerLattice::builtin(name).unwrap()
}

fn pow(p: i64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Exponent vectors in `k` slots summing to `m`, counted by brute force over
/// the box `[0, m]^k`.
fn enumerate_monomials(k: u32, m: u32) -> u64 {
    let mut count = 0;
    let mut digits = vec![0u32; k as usize];
    loop {
        if digits.iter().sum::<u32>() == m {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return count;
            }
            digits[i] += 1;
            if digits[i] <= m {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn c1_monomial_count() -> Outcome {
    for k in 1..=4 {
        for m in 0..=6 {
            let (got, want) = (count_monomials(k, m), enumerate_monomials(k, m));
            ensure(got == want, || format!("k={k} m={m}: formula {got}, enumeration {want}"))?;
        }
    }
    Ok("k<=4, m<=6".into())
}

fn c2_contraction() -> Outcome {
    let form = RatMatrix::identity(1);
    for p in 1..=4u32 {
        for s in 0..=4u32 {
            let u = FockElement::from(FockMonomial::power(0, p, s));
            let got = ok(pair(&u, &u, &form))?;
            let fact: i64 = (1..=i64::from(s)).product();
            let want = BigInt::from(if s % 2 == 0 { 1 } else { -1 }) * fact * pow(i64::from(p), u64::from(s));
            ensure(got == want.clone().into(), || format!("p={p} s={s}: {got} vs {want}"))?;
        }
    }
    Ok("p<=4, s<=4".into())
}

fn orthonormal_b_det(k: u32, n: u32) -> Result<BigInt, String> {
    let basis = monomial_basis(k, n).elements();
    let g = ok(gram_matrix(&basis, &RatMatrix::identity(k as usize)))?;
    Ok(ok(bareiss_determinant(&ok(g.to_integer())?))?.abs())
}

fn c3_orthonormal_b_det() -> Outcome {
    let mut mismatches = Vec::new();
    let mut corrected_ok = true;
    for k in 1..=3 {
        for n in 0..=6 {
            let det = orthonormal_b_det(k, n)?;
            let literal = BigInt::from(b_composition_product(k, n));
            if det != literal {
                mismatches.push(format!("k={k} n={n}: |det| {det}, product of b {literal}"));
            }
            corrected_ok &= det == BigInt::from(monomial_norm_product(k, n));
        }
    }
    let note =
        format!("monomial-norm product {}", if corrected_ok { "matches everywhere" } else { "also fails" });
    if mismatches.is_empty() {
        Ok(format!("k<=3, n<=6; {note}"))
    } else {
        Err(format!("{} mismatches, first {}; {note}", mismatches.len(), mismatches[0]))
    }
}

fn random_unimodular(k: usize, rng: &mut impl Rng) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..4 {
        if k < 2 {
            rows[0][0] = -rows[0][0];
            continue;
        }
        let i = rng.gen_range(0..k);
        let j = (i + rng.gen_range(1..k)) % k;
        let c = rng.gen_range(-2i64..=2);
        let src = rows[j].clone();
        for (x, y) in rows[i].iter_mut().zip(&src) {
            *x += c * y;
        }
    }
    IntMatrix::from_i64_rows(&rows).unwrap()
}

fn c4_index_formula() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x1d3);
    let mut mismatches = Vec::new();
    let mut corrected_ok = true;
    for k in 1..=3u32 {
        for n in 0..=6 {
            let oracle = ok(index_a_over_b(k, n, DEFAULT_BUDGET))?;
            for _ in 0..3 {
                let u = random_unimodular(k as usize, &mut rng);
                let moved = ok(index_a_over_b_in_basis(k, n, &u, DEFAULT_BUDGET))?.from_determinant;
                ensure(moved == oracle, || format!("k={k} n={n}: index {oracle} becomes {moved} after {u}"))?;
            }
            let literal = ok(index_formula_value(k, n))?;
            if BigInt::from(literal.clone()) != oracle {
                mismatches.push(format!("k={k} n={n}: oracle {oracle}, sqrt of product of b {literal}"));
            }
            corrected_ok &= BigInt::from(ok(index_formula_corrected(k, n))?) == oracle;
        }
    }
    let note = format!(
        "basis-change invariance holds; corrected sqrt {}",
        if corrected_ok { "matches everywhere" } else { "also fails" }
    );
    if mismatches.is_empty() {
        Ok(format!("k<=3, n<=6; {note}"))
    } else {
        Err(format!("{} mismatches, first {}; {note}", mismatches.len(), mismatches[0]))
    }
}

fn c5_subring() -> Outcome {
    for k in 1..=3 {
        for n in 0..=6 {
            ensure(ok(verify_b_subring_of_a(k, n, DEFAULT_BUDGET))?, || format!("k={k} n={n}"))?;
        }
    }
    Ok("k<=3, n<=6".into())
}

fn c6_scaling() -> Outcome {
    for p in [2i64, 3] {
        for k in 1..=3u32 {
            for n in 0..=5 {
                for a in weight_vectors(n) {
                    let idx = ok(scaled_block_index(k, &a, &vec![p; k as usize]))?;
                    let want = pow(p, n_exponent(k, &a));
                    ensure(idx == want, || format!("all-variable p={p} k={k} a={a}: {idx} vs {want}"))?;
                }
                let mut scales = vec![1; k as usize];
                scales[0] = p;
                let idx = ok(scaled_weight_index(k, n, &scales, DEFAULT_BUDGET))?;
                let want = pow(p, ok(s_value(k, n))?);
                ensure(idx == want, || format!("single-variable p={p} k={k} n={n}: {idx} vs {want}"))?;
            }
        }
    }
    let a = WeightVector::new(vec![1, 1]);
    let literal = n_exponent_literal(2, &a);
    let oracle_index = ok(scaled_block_index(2, &a, &[2, 2]))?;
    let oracle = (0..64).find(|&e| pow(2, e) == oracle_index).ok_or("index is not a power of 2")?;
    ensure(literal == 4 && oracle == 8, || format!("literal N {literal}, oracle exponent {oracle}"))?;
    Ok(format!("p in {{2,3}}, k<=3, n<=5; literal N(2,(1,1)) = {literal} vs oracle {oracle}"))
}

fn c7_heisenberg_exponent() -> Outcome {
    let a1: Vec<BigInt> = (0..=2)
        .map(|n| det_al(&lat("A1"), n, DEFAULT_BUDGET))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(a1 == [1, 2, 8].map(BigInt::from), || format!("A1 spot values {a1:?}"))?;
    for (name, n_max) in [("A1", 4), ("A2", 3), ("2Z1", 4), ("2Z1+Z1", 3)] {
        let l = lat(name);
        for n in 0..=n_max {
            let oracle = ok(det_al(&l, n, DEFAULT_BUDGET))?;
            let s = ok(det_al_closed(&l, n, ExponentMode::S))?;
            let two_s = ok(det_al_closed(&l, n, ExponentMode::TwoS))?;
            ensure(oracle == s, || format!("{name} n={n}: oracle {oracle}, det^S {s}"))?;
            ensure(&oracle * &oracle == two_s, || format!("{name} n={n}: oracle^2 != det^2S {two_s}"))?;
        }
    }
    Ok("exponent S confirmed; 2S reading is the square; A1 gives 1, 2, 8".into())
}

fn c8_unimodular() -> Outcome {
    for k in 1..=3 {
        let l = IntegerLattice::standard(k);
        for n in 0..=5 {
            let d = ok(det_al(&l, n, DEFAULT_BUDGET))?;
            ensure(d.is_one(), || format!("Z^{k} n={n}: {d}"))?;
        }
    }
    Ok("Z^k, k<=3, n<=5".into())
}

fn c9_voa() -> Outcome {
    let mut a1 = Vec::new();
    for n in 0..=3 {
        let l = lat("A1");
        let full = ok(bareiss_determinant(&ok(voa_full_gram(&l, n, DEFAULT_BUDGET))?))?.abs();
        let block = ok(voa_det_block_product(&l, n, DEFAULT_BUDGET))?;
        let closed = ok(voa_det_closed(&l, n, ExponentMode::S))?;
        ensure(full == block && block == closed, || {
            format!("A1 n={n}: full {full}, block {block}, closed {closed}")
        })?;
        a1.push(block);
    }
    ensure(a1[..3] == [1, 2, 32].map(BigInt::from), || format!("A1 spot values {a1:?}"))?;
    for n in 0..=2 {
        let l = lat("A1A1");
        let full = ok(bareiss_determinant(&ok(voa_full_gram(&l, n, DEFAULT_BUDGET))?))?.abs();
        let block = ok(voa_det_block_product(&l, n, DEFAULT_BUDGET))?;
        ensure(full == block, || format!("A1A1 n={n}: full {full}, block {block}"))?;
    }
    Ok(format!(
        "A1 values {}; A1A1 paths agree for n<=2",
        a1.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    ))
}

fn c10_index_identity() -> Outcome {
    let mut seen = Vec::new();
    for n in 0..=3 {
        let c = ok(index_identity_check(&IntegerLattice::standard(2), &[2, 1], n, DEFAULT_BUDGET))?;
        ensure(c.holds, || format!("n={n}: {c:?}"))?;
        seen.push(format!("n={n}: det {} -> {}", c.det_a1, c.det_a2));
    }
    Ok(format!("Z2 with diag(2,1); {}", seen.join("; ")))
}

fn verify_all_output(jobs: &str) -> Result<Vec<u8>, String> {
    let cli = intform_cli::Cli::try_parse_from(["intform", "verify-all", "--jobs", jobs])
        .map_err(|e| e.to_string())?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = intform_cli::run(cli, &mut out, &mut err);
    ensure(status == 0, || format!("--jobs {jobs}: exit {status}: {}", String::from_utf8_lossy(&err)))?;
    Ok(out)
}

fn c11_determinism() -> Outcome {
    let (a, b) = (verify_all_output("1")?, verify_all_output("4")?);
    ensure(a == b, || "outputs differ".into())?;
    Ok(format!("{} bytes identical", a.len()))
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            title: "monomial count",
            limit: Some(Duration::from_secs(1)),
            run: c1_monomial_count,
        },
        Criterion { id: 2, title: "contraction form", limit: None, run: c2_contraction },
        Criterion {
            id: 3,
            title: "orthonormal monomial determinant",
            limit: Some(Duration::from_secs(30)),
            run: c3_orthonormal_b_det,
        },
        Criterion { id: 4, title: "index formula", limit: None, run: c4_index_formula },
        Criterion { id: 5, title: "subring integrality", limit: None, run: c5_subring },
        Criterion { id: 6, title: "scaling indices", limit: None, run: c6_scaling },
        Criterion {
            id: 7,
            title: "Heisenberg determinant exponent",
            limit: Some(Duration::from_secs(120)),
            run: c7_heisenberg_exponent,
        },
        Criterion { id: 8, title: "unimodular case", limit: None, run: c8_unimodular },
        Criterion {
            id: 9,
            title: "lattice VOA determinant",
            limit: Some(Duration::from_secs(120)),
            run: c9_voa,
        },
        Criterion { id: 10, title: "index identity for sublattices", limit: None, run: c10_index_identity },
        Criterion { id: 11, title: "determinism across --jobs", limit: None, run: c11_determinism },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if result.is_err() {
            failed += 1;
        }
        println!("criterion {:>2} {tag} [{:>8.2?}] {}: {detail}", c.id, elapsed, c.title);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
