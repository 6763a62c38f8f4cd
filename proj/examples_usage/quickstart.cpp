// Generate a planted instance, solve it with both dynamics, check the result
// with the exact oracle, and write the memcomputing deck next to it.

#include <fstream>
#include <iostream>

#include "ctsat/instances.hpp"
#include "ctsat/integrate.hpp"
#include "ctsat/netlist.hpp"
#include "ctsat/oracle.hpp"

int main() {
  using namespace ctsat;
  const auto inst = gen_barthel({30, 4.3, 0.08, 7});
  std::cout << "N=" << inst.problem.num_vars() << " M=" << inst.problem.num_clauses() << '\n';

  SolverSpec analog;
  analog.kind = SolverKind::Analog;
  analog.analog.include_one_eighth_factor = false;
  SolverSpec mem; // memcomputing defaults

  for (const auto &spec : {analog, mem}) {
    const auto rec = run(inst.problem, spec, IntegratorConfig{}, 1);
    std::cout << to_string(spec.kind) << ": " << to_string(rec.outcome) << " at t=" << rec.t_outcome;
    if (rec.assignment) std::cout << ", unsatisfied=" << count_unsatisfied(inst.problem, *rec.assignment);
    std::cout << '\n';
  }

  const auto oracle = solve_dpll(inst.problem);
  std::cout << "oracle: " << (oracle.satisfiable ? "satisfiable" : "unsatisfiable") << '\n';

  std::ofstream("quickstart_mem.cir") << serialize(emit_mem(inst.problem));
}
