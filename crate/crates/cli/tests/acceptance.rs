//! Acceptance criteria, run without the libtest harness so the one-line
//! `PASS`/`FAIL` verdicts always reach the output.

#[path = "../../core/tests/common/minors.rs"]
mod minors;

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};

use modreg_core::abelian::{
    classify, groups_up_to, is_vr_p_group, partitions, primary_decomposition, FgAbGroup,
};
use modreg_core::oracle::{subgroup_type, Caps, FiniteGroupInstance, Oracle};
use modreg_core::snf::{smith_normal_form, IntMatrix};
use modreg_core::sweep::{run_sweep, SweepOptions};
use modreg_core::valdom::{classify_vr_val, ValModule, ValuationRingProfile};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vr_sweep() -> Outcome {
    let r = run_sweep(&SweepOptions { deep_max_order: 1, ..SweepOptions::new(200) }).map_err(|e| e.to_string())?;
    let skipped = r.skipped_groups();
    for s in &r.skipped {
        println!("    skipped {s}");
    }
    ensure(r.mismatches.is_empty(), || format!("mismatches: {:?}", r.mismatches))?;
    ensure(skipped * 20 <= r.groups_checked, || format!("{skipped} of {} skipped", r.groups_checked))?;
    Ok(format!("{} groups, 0 mismatches, {skipped} skipped", r.groups_checked))
}

fn semisimple_torsion(g: &FgAbGroup) -> bool {
    primary_decomposition(g).parts().values().flatten().all(|&e| e == 1)
}

fn svr_cvr_sweep() -> Outcome {
    let r = run_sweep(&SweepOptions::new(64)).map_err(|e| e.to_string())?;
    ensure(r.mismatches.is_empty() && r.skipped.is_empty(), || {
        format!("mismatches {:?}, skipped {:?}", r.mismatches, r.skipped)
    })?;
    let mut checked = 0;
    for g in groups_up_to(64).map_err(|e| e.to_string())? {
        let o = Oracle::for_group(&g, Caps::default()).map_err(|e| e.to_string())?;
        let whole = o.whole();
        let svr = o.strongly_virtually_regular(&whole).map_err(|e| e.to_string())?;
        let cvr = o.completely_virtually_regular(&whole).map_err(|e| e.to_string())?;
        let mut summand_types = BTreeSet::new();
        for b in o.subgroups() {
            if o.is_internal_summand(b, &whole).map_err(|e| e.to_string())? {
                summand_types.insert(subgroup_type(b));
            }
        }
        let vss = o.subgroups().iter().all(|h| summand_types.contains(&subgroup_type(h)));
        let ss = semisimple_torsion(&g);
        ensure(svr == ss && cvr == ss && vss == ss, || {
            format!("{g}: svr={svr} cvr={cvr} vss={vss} semisimple={ss}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} groups, SVR = CVR = VSS = semisimple torsion"))
}

fn cyclic_summands_iff_all_summands() -> Outcome {
    let mut checked = 0;
    for g in groups_up_to(64).map_err(|e| e.to_string())? {
        let o = Oracle::for_group(&g, Caps::default()).map_err(|e| e.to_string())?;
        let whole = o.whole();
        let cyclic = o.strongly_regular(&whole).map_err(|e| e.to_string())?;
        let all = o.every_subgroup_is_summand(&whole).map_err(|e| e.to_string())?;
        ensure(cyclic == all, || format!("{g}: cyclic={cyclic} all={all}"))?;
        checked += 1;
    }
    Ok(format!("{checked} groups"))
}

fn fixtures() -> Outcome {
    let z2z4 = classify(&FgAbGroup::new(0, vec![2, 4]).unwrap());
    ensure(z2z4.virtually_regular, || "Z_2 ⊕ Z_4 should be VR".into())?;
    ensure(!z2z4.strongly_virtually_regular && !z2z4.virtually_semisimple, || {
        "Z_2 ⊕ Z_4 should be neither SVR nor VSS".into()
    })?;
    ensure(!classify(&FgAbGroup::cyclic(4)).virtually_regular, || "Z_4 should not be VR".into())?;
    for n in 1..=5 {
        ensure(classify(&FgAbGroup::free(n)).virtually_regular, || format!("Z^{n} should be VR"))?;
    }
    let o = Oracle::for_group(&FgAbGroup::new(0, vec![2, 4]).unwrap(), Caps::default()).map_err(|e| e.to_string())?;
    ensure(o.virtually_regular(&o.whole()).map_err(|e| e.to_string())?.0, || "oracle: Z_2 ⊕ Z_4".into())?;
    let o = Oracle::for_group(&FgAbGroup::cyclic(4), Caps::default()).map_err(|e| e.to_string())?;
    ensure(!o.virtually_regular(&o.whole()).map_err(|e| e.to_string())?.0, || "oracle: Z_4".into())?;
    Ok("Z_2 ⊕ Z_4, Z_4, Z^n".into())
}

fn snf_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..1000 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-50..=50)).collect();
        let m = IntMatrix::from_i64(r, c, &a).unwrap();
        let s = smith_normal_form(&m);
        let ctx = || format!("case {case}: {r}x{c} {a:?}");
        ensure(s.u.mul(&m).unwrap().mul(&s.v).unwrap() == s.d, || format!("UAV != D, {}", ctx()))?;
        ensure(s.u.determinant().unwrap().abs().is_one(), || format!("det U, {}", ctx()))?;
        ensure(s.v.determinant().unwrap().abs().is_one(), || format!("det V, {}", ctx()))?;
        let diag = s.diagonal();
        let nonzero: Vec<_> = diag.iter().filter(|d| !d.is_zero()).cloned().collect();
        ensure(nonzero.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), || format!("chain, {}", ctx()))?;
        let expected: Vec<num_bigint::BigInt> = minors::invariant_factors(r, c, &a).into_iter().map(Into::into).collect();
        ensure(nonzero == expected, || format!("invariant factors {nonzero:?} vs {expected:?}, {}", ctx()))?;
        if r == c {
            let prod: num_bigint::BigInt = diag.iter().product();
            ensure(m.determinant().unwrap().abs() == prod, || format!("|det|, {}", ctx()))?;
        }
    }
    Ok("1000 matrices up to 6x6".into())
}

fn table_golden() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_modreg")).arg("table").output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("exit {:?}", out.status))?;
    let golden = include_bytes!("../../core/tests/golden/table1.txt");
    ensure(out.stdout == golden, || "output differs from golden".into())?;
    Ok(format!("{} bytes identical", golden.len()))
}

fn splitting() -> Outcome {
    let caps = Caps::default();
    let mut checked = 0;
    for t in groups_up_to(200).map_err(|e| e.to_string())? {
        let inst = FiniteGroupInstance::from_group(&t, caps).map_err(|e| e.to_string())?;
        let vr_t = inst.virtually_regular_by_retraction().map_err(|e| e.to_string())?.0;
        let ss_t = inst.strongly_regular_by_retraction().map_err(|e| e.to_string())?;
        let mut vr_parts = true;
        for &p in primary_decomposition(&t).parts().keys() {
            let tp = FiniteGroupInstance::from_group(&t.p_component(p), caps).map_err(|e| e.to_string())?;
            vr_parts &= tp.virtually_regular_by_retraction().map_err(|e| e.to_string())?.0;
        }
        ensure(vr_t == vr_parts, || format!("{t}: VR(T)={vr_t}, all VR(T_p)={vr_parts}"))?;
        for r in 0..=2 {
            let g = FgAbGroup::new(r, t.invariant_factors().to_vec()).unwrap();
            let v = classify(&g);
            ensure(g.torsion_part() == t, || format!("{g}: torsion part"))?;
            ensure(v.virtually_regular == vr_t, || format!("{g}: VR(G) != VR(T)"))?;
            ensure(v.strongly_virtually_regular == ss_t, || format!("{g}: SVR(G) != T semisimple"))?;
            ensure(v.completely_virtually_regular == ss_t, || format!("{g}: CVR(G) != T semisimple"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} groups"))
}

fn dvr_transfer() -> Outcome {
    let caps = Caps { max_order: 256, ..Caps::default() };
    let mut checked = 0;
    for n in 1..=8 {
        for lambda in partitions(n) {
            let (dvr, _) = classify_vr_val(&ValModule::p_powers(0, &{
                let mut l = lambda.clone();
                l.sort();
                l
            }), &ValuationRingProfile::DVR);
            let rule = is_vr_p_group(&lambda).map_err(|e| e.to_string())?.0;
            let moduli: Vec<u64> = lambda.iter().map(|&e| 2u64.pow(e)).collect();
            let inst = FiniteGroupInstance::new(&moduli, caps).map_err(|e| e.to_string())?;
            let oracle = inst.virtually_regular_by_retraction().map_err(|e| e.to_string())?.0;
            ensure(dvr == rule && rule == oracle, || {
                format!("{lambda:?}: dvr={dvr} rule={rule} oracle={oracle}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} partitions, 2-groups up to order 256"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 virtual regularity sweep to order 200", vr_sweep),
        ("2 SVR/CVR sweep to order 64", svr_cvr_sweep),
        ("3 cyclic summands iff all summands", cyclic_summands_iff_all_summands),
        ("4 fixtures", fixtures),
        ("5 Smith normal form fuzz", snf_fuzz),
        ("6 structure table golden", table_golden),
        ("7 torsion splitting", splitting),
        ("8 DVR / abelian transfer", dvr_transfer),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
