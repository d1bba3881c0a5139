use iterhash::family::{enumerate_instances, sample_instance, FamilySpec, Params};

fn main() {
    let spec = FamilySpec::parse("cwpoly:L=8").unwrap();
    let a = vec![3u64];
    let b = vec![5u64, 9];
    let e = enumerate_instances(&spec, 1 << 10).unwrap();
    let hits: Vec<u64> = e
        .iter()
        .filter(|inst| inst.hash(&a).unwrap() == inst.hash(&b).unwrap())
        .map(|inst| match inst.params { Params::CwPoly { t } => t, _ => 0 })
        .collect();
    println!("exact roots: {:?} count {} / {}", hits, hits.len(), e.count());
    let mut mc = 0;
    for i in 0..40000u64 {
        let inst = sample_instance(&spec, iterhash::rng::substream(1, i)).unwrap();
        mc += (inst.hash(&a).unwrap() == inst.hash(&b).unwrap()) as u64;
    }
    println!("mc hits: {mc} / 40000 = {}", mc as f64 / 40000.0);
    // check t distribution of sampled instances
    let mut t_hist = [0u32; 4];
    for i in 0..1000u64 {
        if let Params::CwPoly { t } = sample_instance(&spec, iterhash::rng::substream(1, i)).unwrap().params {
            t_hist[(t / 64) as usize] += 1;
        }
    }
    println!("t quartiles: {t_hist:?}");
}
