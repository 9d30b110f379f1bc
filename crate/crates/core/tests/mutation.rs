//! Every branch constant nudged by ±1/100 must be caught by the Hölder or
//! the unit-scale oscillation campaign.

use ilgraph::numerics::{rat, Rational};
use ilgraph::selfsim::{Branch, BranchTag, Ifs};
use ilgraph::verify::{verify_claim2, verify_holder, Caps};

fn field(b: &mut Branch, i: usize) -> &mut Rational {
    match i {
        0 => &mut b.x_scale,
        1 => &mut b.x_offset,
        2 => &mut b.y_scale,
        _ => &mut b.y_offset,
    }
}

#[test]
fn every_perturbation_is_detected() {
    let ifs = Ifs::standard();
    let mut missed = Vec::new();
    for tag in [BranchTag::Left, BranchTag::Mid, BranchTag::Right] {
        for i in 0..4 {
            for d in [rat(1, 100), rat(-1, 100)] {
                let mut b = ifs.branch(tag).clone();
                *field(&mut b, i) += &d;
                let mutant = ifs.clone().with_branch(b);
                let holder = verify_holder(&mutant, 5, 0, &Caps::default()).unwrap();
                if holder.certified && verify_claim2(&mutant, 201, 30).unwrap().certified {
                    missed.push(format!("{tag:?} constant {i} by {d}"));
                }
            }
        }
    }
    assert!(missed.is_empty(), "undetected: {missed:?}");
}

#[test]
fn unperturbed_system_passes_both() {
    let ifs = Ifs::standard();
    assert!(ifs.joint_defects().is_empty());
    assert!(
        verify_holder(&ifs, 5, 0, &Caps::default())
            .unwrap()
            .certified
    );
    assert!(verify_claim2(&ifs, 201, 30).unwrap().certified);
}
