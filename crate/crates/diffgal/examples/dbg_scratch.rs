use diffgal::construct::*;
use diffgal::field::*;
use diffgal::fixtures::*;
use diffgal::ratsol::*;
use std::time::Instant;

fn main() {
    let qq = Rationals;
    let t0 = Instant::now();
    let l4 = build_l4(&qq).expect("build L4");
    println!("L4 build {:?}", t0.elapsed());
    let t = Instant::now();
    let e2 = ext_square(&qq, &l4).expect("ext2");
    println!("Ext2(L4) order {:?} in {:?}", e2.order(), t.elapsed());
    let t = Instant::now();
    let rep = rational_solutions(&qq, &e2).expect("ratsols");
    println!("solutions {} certified {} in {:?}", rep.solutions.len(), rep.certified, t.elapsed());
    let want = golden_ext2_l4(&qq);
    for s in &rep.solutions {
        let r = s.div(&qq, &want).unwrap();
        println!("matches golden ext2(L4) up to scalar: {}", r.is_constant());
    }
    let t = Instant::now();
    let adj = l4.adjoint(&qq).monic(&qq).0;
    let e2a = ext_square(&qq, &adj).expect("ext2 adj");
    println!("Ext2(adj L4) order {:?} in {:?}", e2a.order(), t.elapsed());
    let t = Instant::now();
    let repa = rational_solutions(&qq, &e2a).expect("ratsols adj");
    println!("adj solutions {} in {:?}", repa.solutions.len(), t.elapsed());
    let wanta = golden_ext2_adj_l4(&qq);
    for s in &repa.solutions {
        let r = s.div(&qq, &wanta).unwrap();
        println!("matches golden ext2(adj L4) up to scalar: {}", r.is_constant());
    }
}
