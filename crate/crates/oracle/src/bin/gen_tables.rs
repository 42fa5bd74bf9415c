//! Regenerates the checked-in coupling reference table.
//!
//! Usage: cargo run -p helike-oracle --bin gen-tables > couplings20.csv

use helike_oracle::coupling_reference;

fn main() {
    println!("Z,L1,L2,L3,d1,d2,d3,A0,A1,B0,B1,C");
    for z in 1..=99u32 {
        let r = coupling_reference(z);
        let cols = [
            r.lambda[0].to_decimal(20),
            r.lambda[1].to_decimal(20),
            r.lambda[2].to_decimal(20),
            r.delta[0].to_decimal(20),
            r.delta[1].to_decimal(20),
            r.delta[2].to_decimal(20),
            r.a0.to_decimal(20),
            r.a1.to_decimal(20),
            r.b0.to_decimal(20),
            r.b1.to_decimal(20),
            r.c.to_decimal(20),
        ];
        println!("{z},{}", cols.join(","));
    }
}
