use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let filter = args.get(1).cloned().unwrap_or_default();
    for id in helike::acceptance::CRITERION_IDS {
        if !id.contains(&filter) { continue; }
        let t = Instant::now();
        let rep = helike::acceptance::run(id).unwrap();
        println!("{:>40}  {:>9.2?}  {}", id, t.elapsed(), rep.status_label());
        if !rep.passed {
            for l in &rep.details { if l.starts_with("BAD") { println!("    {l}"); } }
        }
    }
}
