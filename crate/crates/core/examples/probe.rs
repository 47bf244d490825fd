use stringy_core::*;
use stringy_core::invariants::*;
use stringy_core::pushforward::integrate_base;

fn main() {
    let t0 = std::time::Instant::now();
    for (kind, label) in [
        (ModelKind::Su5 { resolution: 1 }, "su5"),
        (ModelKind::So10, "so10"),
        (ModelKind::E6, "e6"),
    ] {
        for dim in 1..=3u32 {
            let t = builtin_tower(kind, dim).unwrap();
            let row = euler_polynomial(&t, false).unwrap();
            println!("{label} dim {dim}: {}", row.render());
            let cy = euler_polynomial(&t, true).unwrap();
            println!("{label} CY dim {dim}: {}", cy.render());
        }
    }
    println!("chern tables: {:?}", t0.elapsed());
    let t1 = std::time::Instant::now();
    for (kind, label) in [
        (ModelKind::Su5 { resolution: 1 }, "su5"),
        (ModelKind::So10, "so10"),
        (ModelKind::E6, "e6"),
    ] {
        let t = builtin_tower(kind, 3).unwrap();
        for i in 1..=4u32 {
            let p = p_coefficient(&t, i).unwrap();
            println!("{label} P{i}: {}", p.render());
        }
    }
    println!("hirz tables: {:?}", t1.elapsed());
    let t2 = std::time::Instant::now();
    for (kind, _label) in [
        (ModelKind::Su5 { resolution: 1 }, "su5"),
        (ModelKind::So10, "so10"),
        (ModelKind::E6, "e6"),
    ] {
        for dim in 1..=3u32 {
            let r = verify_milnor_factorization(kind, dim).unwrap();
            println!("{} dim {dim}: W identity holds = {}", r.model, r.holds());
        }
    }
    println!("verify: {:?}", t2.elapsed());
    let t3 = std::time::Instant::now();
    for dim in 1..=3u32 {
        let t = builtin_tower(ModelKind::E6, dim).unwrap();
        let chi = chi_y_polynomial(&t).unwrap();
        println!("e6 chi_y dim {dim}: max y order {}", chi.max_y_order());
        let euler = euler_polynomial(&t, false).unwrap();
        let at_m1 = chi.substitute_y(&rat_int(-1)).unwrap();
        println!("  y=-1 equals euler row: {}", at_m1 == euler);
    }
    println!("chi_y: {:?}", t3.elapsed());
}
