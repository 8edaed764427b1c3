//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p compalg --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use compalg::algebra::{Algebra, VerifyMode};
use compalg::hurwitz::{
    cayley_dickson, cayley_dickson_tower, preserves_polar_form, quadratic_etale, quaternion_inverse, rotation_so3,
    rotation_so4, split_basis, split_cayley, trace_zero_basis,
};
use compalg::linalg::vec_scale;
use compalg::magic_square::{build_g, jacobi_check, lie_invariants, magic_slot, magic_table, Flavor, JacobiMode, MAGIC_DIMS};
use compalg::scalars::Field;
use compalg::symcomp::{
    char3_twodim, cyclic_automorphism, okubo_char3, okubo_second_kind, okubo_sl3, petersson, split_okubo,
};
use compalg::triality::{pi0_inverse, theta_fixed_dimension, tri_basis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn minus_ones(f: &Field, n: usize) -> Vec<compalg::scalars::Scalar> {
    vec![f.from_i64(-1); n]
}

fn symmetric_ok(a: &Algebra) -> Result<(), String> {
    let r = a.verify_symmetric().map_err(|e| e.to_string())?;
    ensure(r.passed, || r.summary())?;
    let r = a.verify_composition(VerifyMode::Symbolic).map_err(|e| e.to_string())?;
    ensure(r.passed, || r.summary())
}

fn hurwitz_ok(a: &Algebra) -> Result<(), String> {
    let r = a.verify_composition(VerifyMode::Symbolic).map_err(|e| e.to_string())?;
    ensure(r.passed, || r.summary())?;
    let r = a.verify_hurwitz_properties().map_err(|e| e.to_string())?;
    ensure(r.passed, || r.summary())
}

fn criterion_1() -> Outcome {
    for f in [Field::rationals(), gf(3), gf(5), gf(7)] {
        let tower = cayley_dickson_tower(&f, &minus_ones(&f, 4)).map_err(|e| e.to_string())?;
        for a in &tower[..4] {
            hurwitz_ok(a).map_err(|e| format!("{} dim {}: {e}", f.name(), a.dim()))?;
        }
        let r = tower[4].verify_composition(VerifyMode::Symbolic).map_err(|e| e.to_string())?;
        let law = r.check("n(xy) = n(x)n(y)").ok_or("missing check")?;
        ensure(!law.passed && law.witness.is_some(), || format!("{}: dimension 16 passed", f.name()))?;
    }
    Ok("dims 1,2,4,8 pass and 16 fails with a witness over Q, GF(3), GF(5), GF(7)".into())
}

fn criterion_2() -> Outcome {
    let q = Field::rationals();
    ensure(common::matches_golden(&split_cayley(&q), common::figure1()), || "split Cayley differs from figure1.txt".into())?;
    let k = quadratic_etale(&q, &q.zero()).map_err(|e| e.to_string())?;
    let c = cayley_dickson(&cayley_dickson(&k, &q.one()).unwrap(), &q.one()).map_err(|e| e.to_string())?;
    let bc = split_basis(&c, 2).map_err(|e| e.to_string())?;
    ensure(bc.verified && common::matches_golden(&bc.target, common::figure1()), || "split basis does not reproduce the table".into())?;
    Ok("golden table matches; split basis of CD(CD(K,1),1) over Q reproduces it".into())
}

fn criterion_3() -> Outcome {
    for f in [Field::rationals(), gf(2), gf(3), gf(7)] {
        let c = split_cayley(&f);
        let phi = cyclic_automorphism(&c).map_err(|e| e.to_string())?;
        let p = petersson(&c, &phi).map_err(|e| e.to_string())?;
        let o = split_okubo(&f);
        ensure(p.structure_constants() == o.structure_constants(), || format!("Petersson differs from split Okubo over {}", f.name()))?;
        ensure(common::matches_golden(&p, common::figure2()), || format!("differs from figure2.txt over {}", f.name()))?;
    }
    Ok("Petersson(split Cayley, cyclic) = split Okubo = figure2.txt over Q, GF(2), GF(3), GF(7)".into())
}

fn okubo_checks(a: &Algebra) -> Result<(), String> {
    symmetric_ok(a)?;
    ensure(a.find_unit().is_none(), || format!("{} has a unit", a.name))?;
    ensure(a.commutative_center().is_empty(), || format!("{} has a nonzero commutative center", a.name))
}

fn criterion_4() -> Outcome {
    let q = Field::rationals();
    for &d in &MAGIC_DIMS {
        let p = magic_slot(&q, d, Flavor::Para).map_err(|e| e.to_string())?;
        symmetric_ok(&p).map_err(|e| format!("para dim {d}: {e}"))?;
    }
    okubo_checks(&split_okubo(&q))?;
    let f7 = gf(7);
    okubo_checks(&okubo_sl3(&f7, &f7.from_i64(2)).map_err(|e| e.to_string())?)?;
    okubo_checks(&okubo_second_kind(&q).map_err(|e| e.to_string())?)?;
    let f3 = gf(3);
    let o = okubo_char3(&f3, &f3.one(), &f3.one()).map_err(|e| e.to_string())?;
    ensure(o.structure_constants() == split_okubo(&f3).structure_constants(), || "O(1,1) differs from split Okubo".into())?;
    okubo_checks(&o)?;
    let ft = Field::rational_functions(&f3, "t");
    let t = ft.generator().unwrap();
    symmetric_ok(&char3_twodim(&ft, &t, true).map_err(|e| e.to_string())?)?;
    Ok("para dims 1,2,4,8, split Okubo, sl3 Okubo, second-kind Okubo, O(1,1), two-dimensional char 3 algebra".into())
}

fn criterion_5() -> Outcome {
    let q = Field::rationals();
    let po = magic_slot(&q, 8, Flavor::Para).map_err(|e| e.to_string())?;
    let o = split_okubo(&q);
    let mut base = o.basis(0);
    base[1] = q.one();
    for (s, a) in [(po.clone(), po.basis(0)), (o.clone(), base)] {
        let u = s.kaplansky_unitalize(&a).map_err(|e| e.to_string())?;
        hurwitz_ok(&u).map_err(|e| format!("{}: {e}", s.name))?;
        ensure(u.find_unit().is_some(), || "no unit".into())?;
        ensure(u.norm == s.norm, || format!("{}: norm changed", s.name))?;
    }
    Ok("unitalized para-octonions and split Okubo pass the Hurwitz suite with the same norm".into())
}

fn criterion_6() -> Outcome {
    let q = Field::rationals();
    let h = cayley_dickson_tower(&q, &minus_ones(&q, 2)).map_err(|e| e.to_string())?.pop().unwrap();
    let n = h.norm().unwrap();
    let n3 = n.in_basis(&trace_zero_basis(&h).map_err(|e| e.to_string())?);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random = |rng: &mut ChaCha8Rng| loop {
        let v: Vec<_> = (0..4).map(|_| q.random(rng)).collect();
        if !n.eval(&v).is_zero() {
            break v;
        }
    };
    let m1 = q.from_i64(-1);
    for _ in 0..100 {
        let (a, b) = (random(&mut rng), random(&mut rng));
        let ra = rotation_so3(&h, &a).map_err(|e| e.to_string())?;
        let rb = rotation_so3(&h, &b).map_err(|e| e.to_string())?;
        ensure(rotation_so3(&h, &h.mul(&a, &b)).unwrap() == ra.mul(&rb), || "so3 homomorphism".into())?;
        ensure(rotation_so3(&h, &vec_scale(&q, &m1, &a)).unwrap() == ra, || "so3(q) != so3(-q)".into())?;
        ensure(preserves_polar_form(&n3, &ra) && q.is_one(&ra.determinant()), || "so3 not orthogonal of det 1".into())?;
        let (c, d) = (random(&mut rng), random(&mut rng));
        let s1 = rotation_so4(&h, &a, &b).unwrap();
        let s2 = rotation_so4(&h, &c, &d).unwrap();
        let prod = rotation_so4(&h, &h.mul(&a, &c), &h.mul(&b, &d)).unwrap();
        ensure(s1.mul(&s2) == prod, || "so4 homomorphism".into())?;
        // Equal norms: conjugate a by b.
        let a2 = h.mul(&h.mul(&b, &a), &quaternion_inverse(&h, &b).unwrap());
        let iso = rotation_so4(&h, &a, &a2).unwrap();
        ensure(preserves_polar_form(n, &iso) && q.is_one(&iso.determinant()), || "so4 not orthogonal of det 1".into())?;
    }
    Ok("100 seeded pairs over Q: homomorphism, orthogonality, det 1, so3(q) = so3(-q)".into())
}

fn criterion_7() -> Outcome {
    let mut fixed_dims = Vec::new();
    for f in [Field::rationals(), gf(5), gf(7)] {
        let po = magic_slot(&f, 8, Flavor::Para).map_err(|e| e.to_string())?;
        for (s, expected_fixed) in [(po, Some(14)), (split_okubo(&f), if f.characteristic() == 7 { Some(8) } else { None })] {
            let basis = tri_basis(&s).map_err(|e| e.to_string())?;
            ensure(basis.len() == 28, || format!("{} over {}: dim tri = {}", s.name, f.name(), basis.len()))?;
            for i in 0..8 {
                for j in i + 1..8 {
                    let t = compalg::triality::t_triple(&s, &s.basis(i), &s.basis(j)).map_err(|e| e.to_string())?;
                    ensure(t.is_related(&s), || format!("t(e{i}, e{j}) not related"))?;
                }
            }
            for t in &basis {
                let back = pi0_inverse(&s, &t.d[0]).map_err(|e| e.to_string())?;
                ensure(back == *t, || {
                    format!("pi0 round trip for {} over {}: related {} {}", s.name, f.name(), t.is_related(&s), back.is_related(&s))
                })?;
                ensure(t.theta().theta().theta() == *t, || "theta^3 != id".into())?;
            }
            if let Some(k) = expected_fixed {
                let got = theta_fixed_dimension(&f, &basis).map_err(|e| e.to_string())?;
                ensure(got == k, || format!("{} over {}: theta-fixed dimension {got}, expected {k}", s.name, f.name()))?;
                fixed_dims.push(format!("{}/{}={got}", s.name, f.name()));
            }
        }
    }
    Ok(format!("dim tri = 28 throughout; theta-fixed {}", fixed_dims.join(", ")))
}

const GRID: [[usize; 4]; 4] = [[3, 8, 21, 52], [8, 16, 35, 78], [21, 35, 66, 133], [52, 78, 133, 248]];

fn criterion_8() -> Outcome {
    let t = magic_table(&Field::rationals(), Flavor::Para).map_err(|e| e.to_string())?;
    ensure(t.dims == GRID, || format!("Q para grid {:?}", t.dims))?;
    let t = magic_table(&gf(7), Flavor::OkuboMix).map_err(|e| e.to_string())?;
    ensure(t.dims == GRID, || format!("GF(7) Okubo grid {:?}", t.dims))?;
    Ok("grid over Q (para) and GF(7) (split Okubo in the 8 slot) equals 3,8,21,52/8,16,35,78/21,35,66,133/52,78,133,248".into())
}

fn criterion_9() -> Outcome {
    let q = Field::rationals();
    let slots: Vec<Algebra> = MAGIC_DIMS.iter().map(|&d| magic_slot(&q, d, Flavor::Para).unwrap()).collect();
    for r in 0..4 {
        for s in 0..4 {
            let g = build_g(&slots[r], &slots[s]).map_err(|e| e.to_string())?;
            let n = g.dim();
            let rep = if n <= 133 {
                jacobi_check(&g, JacobiMode::Full)
            } else {
                jacobi_check(&g, JacobiMode::Sample { count: 1_000_000, seed: 42 })
            };
            ensure(rep.passed, || rep.summary())?;
            if n > 133 {
                let rep = jacobi_check(&g, JacobiMode::Full);
                ensure(rep.passed, || rep.summary())?;
            }
            let inv = lie_invariants(&g);
            ensure(inv.center == 0 && inv.derived == n && inv.killing_rank == n, || format!("invariants of dim {n}: {inv:?}"))?;
        }
    }
    Ok("full Jacobi for all 16 entries, plus 10^6 sampled triples at 248; center 0, derived full, Killing nondegenerate for all 16".into())
}

fn criterion_10() -> Outcome {
    let q = Field::rationals();
    let o = split_okubo(&q);
    let entries = o.structure_constants();
    for (m, _) in entries.iter().enumerate() {
        let flipped = entries.iter().enumerate().map(|(k, (i, j, l, c))| (*i, *j, *l, if k == m { q.neg(c) } else { c.clone() }));
        let mut a = Algebra::new(&q, "mutant", o.labels.clone(), flipped).unwrap();
        a.norm = o.norm.clone();
        let sym = a.verify_symmetric().unwrap().passed;
        let comp = a.verify_composition(VerifyMode::Symbolic).unwrap().passed;
        ensure(!(sym && comp), || format!("flipping entry {m} of the split Okubo table went undetected"))?;
    }
    let g = build_g(&magic_slot(&q, 1, Flavor::Para).unwrap(), &magic_slot(&q, 8, Flavor::Para).unwrap()).map_err(|e| e.to_string())?;
    let constants = g.structure_constants();
    let step = constants.len() / 16;
    for (i, j, k, _) in constants.iter().step_by(step.max(1)).take(16) {
        let rep = jacobi_check(&g.with_flipped_sign(*i, *j, *k), JacobiMode::Full);
        ensure(!rep.passed, || format!("flipping [{}, {}] -> {} in g(S1,S8) went undetected", g.labels[*i], g.labels[*j], g.labels[*k]))?;
    }
    Ok(format!("all {} single sign flips in the split Okubo table detected; 16 flips in g(S1,S8) fail Jacobi", entries.len()))
}

fn main() {
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(criterion_3)),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail}) [{secs:.1}s]"),
            Err(reason) => {
                failed += 1;
                println!("criterion {n}: FAIL ({reason}) [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
