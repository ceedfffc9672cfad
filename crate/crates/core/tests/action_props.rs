//! Structural properties of the adjoint action: the nilradical is preserved
//! by every unitriangular generator, the one-parameter group law holds as a
//! polynomial identity, and the minor shift identity behind the pair
//! invariants comes out exactly.

use parinv_core::action::{act_on_polynomial, FormalMatrix, GroupGenerator};
use parinv_core::poly::{Polynomial, VariableId};
use parinv_core::roots::{GeneratorSet, Root};
use parinv_core::verify::compositions_up_to;

#[test]
fn conjugation_preserves_nilradical_support_up_to_n10() {
    for sizes in compositions_up_to(10) {
        let gens = GeneratorSet::from_sizes(sizes.clone()).unwrap();
        let comp = gens.composition();
        let xm = FormalMatrix::generic(comp);
        for r in comp.positive_roots() {
            let g = GroupGenerator::symbolic(r.i, r.j);
            xm.conjugate(&g)
                .unwrap_or_else(|e| panic!("support escapes for {sizes:?} at {r}: {e}"));
        }
    }
}

#[test]
fn one_parameter_group_law_for_all_generators() {
    for sizes in [vec![2, 1, 3, 2], vec![1, 2, 1], vec![2, 2]] {
        let gens = GeneratorSet::from_sizes(sizes).unwrap();
        let comp = gens.composition();
        // a polynomial touching several rows and columns
        let f = gens
            .base_minors()
            .into_iter()
            .fold(Polynomial::one(), |acc, (_, p)| &acc * &p);
        for r in comp.positive_roots() {
            let g1 = GroupGenerator::symbolic_k(r.i, r.j, 1);
            let g2 = GroupGenerator::symbolic_k(r.i, r.j, 2);
            let two_steps =
                act_on_polynomial(comp, &act_on_polynomial(comp, &f, &g1).unwrap(), &g2).unwrap();
            let sum = &Polynomial::var(VariableId::Param(1))
                + &Polynomial::var(VariableId::Param(2));
            let one_step =
                act_on_polynomial(comp, &f, &GroupGenerator::new(r.i, r.j, sum)).unwrap();
            assert_eq!(two_steps, one_step, "group law at {r}");
        }
    }
}

#[test]
fn minor_shift_identity_on_the_worked_example() {
    // the generator g_{5,6}(t) moves the order-3 minors into each other:
    // the column rule shifts the (1,6) minor by the (1,5) minor and the row
    // rule shifts the (5,7) coordinate by the (6,7) coordinate, with
    // opposite parameter signs, which is exactly why the pair sums stay
    // invariant
    let gens = GeneratorSet::from_sizes(vec![2, 1, 3, 2]).unwrap();
    let comp = gens.composition();
    let t = Polynomial::var(VariableId::Param(0));

    let m16 = gens.minor(Root::new(1, 6)).unwrap();
    let m15 = gens.minor(Root::new(1, 5)).unwrap();
    let g = GroupGenerator::symbolic(5, 6);
    let acted = act_on_polynomial(comp, &m16, &g).unwrap();
    assert_eq!(&acted - &m16, -&(&t * &m15));
    let acted_back = act_on_polynomial(comp, &m16, &g.inverse()).unwrap();
    assert_eq!(&acted_back - &m16, &t * &m15);

    let m57 = gens.minor(Root::new(5, 7)).unwrap();
    let m67 = gens.minor(Root::new(6, 7)).unwrap();
    let acted = act_on_polynomial(comp, &m57, &g).unwrap();
    assert_eq!(&acted - &m57, &t * &m67);

    // and the pair sum built from them is untouched
    let q = gens
        .pairs()
        .iter()
        .find(|q| q.phi == Root::new(5, 7))
        .copied()
        .unwrap();
    let l = gens.pair_invariant(&q).unwrap();
    assert_eq!(act_on_polynomial(comp, &l, &g).unwrap(), l);
}

#[test]
fn identity_generator_fixes_everything() {
    let gens = GeneratorSet::from_sizes(vec![1, 2, 1]).unwrap();
    let comp = gens.composition();
    let f = gens.minor(Root::new(1, 4)).unwrap();
    let id = GroupGenerator::new(2, 4, Polynomial::zero());
    assert_eq!(act_on_polynomial(comp, &f, &id).unwrap(), f);
}
