mod oracle;

use medial_lattice::bms::{bms_anti_mov, bms_mov, bms_move_graph};
use medial_lattice::corpus;
use medial_lattice::planar::EdgeId;
use medial_lattice::quiver_rep::{canonical_potential, check_jacobian, state_module};
use medial_lattice::weights::{AngularCycle, DecoratedGraph};
use proptest::prelude::*;

fn instances() -> Vec<DecoratedGraph> {
    let mut out: Vec<DecoratedGraph> = corpus::diagrams()
        .iter()
        .map(|d| d.kauffman_graph())
        .collect();
    out.extend(corpus::doubled_kauffman().into_iter().map(|(_, dg)| dg));
    out.push(corpus::triangle_decorated());
    out.push(corpus::hopf_two_zero_faces());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn moves_invert(pick in 0usize..1000, state in 0usize..1000, edge in 0usize..1000) {
        let all = instances();
        let dg = &all[pick % all.len()];
        let g = &dg.states()[state % dg.states().len()];
        let e = EdgeId(edge % dg.map().num_edges());
        if dg.is_movable(g, e).unwrap() {
            let moved = dg.mov(g, e).unwrap();
            prop_assert!(dg.is_compatible(&moved));
            prop_assert_eq!(&dg.anti_mov(&moved, e).unwrap(), g);
        }
        if dg.is_anti_movable(g, e).unwrap() {
            prop_assert_eq!(&dg.mov(&dg.anti_mov(g, e).unwrap(), e).unwrap(), g);
        }
    }

    #[test]
    fn pairing_is_independent_of_the_state(pick in 0usize..1000, cycle in 0usize..1000) {
        let all = instances();
        let dg = &all[pick % all.len()];
        let q = dg.quiver();
        let cycles: Vec<_> = q.vertex_cycles().iter().chain(q.face_cycles()).cloned().collect();
        let c = AngularCycle::new(q, cycles[cycle % cycles.len()].clone()).unwrap();
        let first = dg.lambda(&c, &dg.states()[0]);
        for g in dg.states() {
            prop_assert_eq!(dg.lambda(&c, g), first);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bms_moves_invert_and_respect_the_jacobian(pick in 0usize..9, node in 0usize..1000, edge in 0usize..1000) {
        let d = &corpus::diagrams()[pick];
        let dg = d.kauffman_graph();
        let graph = bms_move_graph(&dg, dg.states(), None).unwrap();
        let xi = &graph.nodes[node % graph.nodes.len()];
        let e = EdgeId(edge % dg.map().num_edges());
        if let Ok(up) = bms_mov(&dg, xi, e) {
            prop_assert_eq!(&bms_anti_mov(&dg, &up, e).unwrap(), xi);
            prop_assert_eq!(up.d.total(), xi.d.total() + 1);
        }
        let s = canonical_potential(&dg).unwrap();
        prop_assert!(check_jacobian(&state_module(&dg, xi), &s).unwrap().is_ok());
    }

    #[test]
    fn simple_cycles_have_nonnegative_pairing(pick in 0usize..1000) {
        let all = instances();
        let dg = &all[pick % all.len()];
        if dg.quiver().num_arrows() <= 16 {
            let m = dg.nilpotency_degree().unwrap();
            for c in oracle::simple_cycles(dg.quiver()) {
                let c = AngularCycle::new(dg.quiver(), c).unwrap();
                prop_assert!(dg.lambda(&c, &dg.states()[0]) >= m);
            }
        }
    }
}
