use interdict::instgen::{batch_specs, from_partition, generate, GenSpec, Generator, PartitionSpec};
use interdict::{solve_dp, ExactStatus, Instance};

#[test]
fn gen1_costs_average_near_midpoint() {
    let mut sum = 0u64;
    let mut count = 0u64;
    for spec in batch_specs(Generator::Gen1, 10, 1, 0, 10_000).unwrap() {
        let inst = generate(&spec).unwrap();
        sum += inst.costs().iter().sum::<u64>();
        count += inst.n() as u64;
    }
    let mean = sum as f64 / count as f64;
    assert!((mean - 50.5).abs() <= 1.0, "mean {mean}");
}

#[test]
fn gen2_costs_track_weights() {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for spec in batch_specs(Generator::Gen2, 10, 1, 0, 10_000).unwrap() {
        let inst = generate(&spec).unwrap();
        xs.extend(inst.costs().iter().map(|&c| c as f64));
        ys.extend(inst.weights().iter().map(|&w| w as f64));
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let corr = cov / (vx * vy).sqrt();
    assert!(corr >= 0.95, "corr {corr}");
    assert!(xs.iter().zip(&ys).all(|(x, y)| (x - y).abs() <= 5.0));
}

#[test]
fn same_spec_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for g in [Generator::Gen1, Generator::Gen2, Generator::Partition] {
        let spec = GenSpec::new(g, 12, 2, 99).unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        generate(&spec).unwrap().save(&a).unwrap();
        generate(&spec).unwrap().save(&b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(Instance::load(&a).unwrap(), generate(&spec).unwrap());
    }
}

#[test]
fn different_seeds_differ() {
    let a = generate(&GenSpec::new(Generator::Gen1, 12, 1, 1).unwrap()).unwrap();
    let b = generate(&GenSpec::new(Generator::Gen1, 12, 1, 2).unwrap()).unwrap();
    assert_ne!(a.costs(), b.costs());
}

#[test]
fn partition_reduction_decides_partition() {
    // {3,1,1,2,2,1} splits into two halves of 5
    let ps = PartitionSpec::new(vec![3, 1, 1, 2, 2, 1]).unwrap();
    let yes = from_partition(&ps, 1).unwrap();
    assert_eq!(yes.budget(), 4);
    assert_eq!(solve_dp(&yes).unwrap().objective, Some(ps.half()));
    // {2,2,4,6} sums to 14 but every subset sum is even
    let ps = PartitionSpec::new(vec![2, 2, 4, 6]).unwrap();
    let no = solve_dp(&from_partition(&ps, 1).unwrap()).unwrap();
    assert_eq!(no.status, ExactStatus::Optimal);
    assert!(no.objective.unwrap() > ps.half());
    assert!(PartitionSpec::new(vec![1, 2]).is_err());
}

#[test]
fn tiny_instances_are_refused() {
    assert!(generate(&GenSpec::new(Generator::Gen1, 3, 1, 0).unwrap()).is_err());
    assert!(generate(&GenSpec::new(Generator::Partition, 2, 1, 0).unwrap()).is_err());
    let four = generate(&GenSpec::new(Generator::Gen2, 4, 1, 0).unwrap()).unwrap();
    assert!(four.all_attackable());
}
