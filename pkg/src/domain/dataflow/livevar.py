"""
活跃变量分析
"""
from ..cfg.cfg import CFG
from ..ir.refs import Var
from ..ir.stmts import Stmt
from .analysis import DataflowAnalysis, Direction
from .fact import SetFact


class LiveVariableAnalysis(DataflowAnalysis[SetFact[Var]]):
    """反向分析：in = (out - def) ∪ uses"""

    ID = "livevar"
    direction = Direction.BACKWARD

    def new_boundary_fact(self, cfg: CFG) -> SetFact[Var]:
        return SetFact()

    def new_initial_fact(self) -> SetFact[Var]:
        return SetFact()

    def copy_fact(self, fact: SetFact[Var]) -> SetFact[Var]:
        return fact.copy()

    def meet_into(self, fact: SetFact[Var], target: SetFact[Var]) -> bool:
        return target.union(fact)

    def transfer_node(self, stmt: Stmt, in_fact: SetFact[Var], out_fact: SetFact[Var]) -> bool:
        new_in = out_fact.copy()
        if stmt.def_var is not None:
            new_in.remove(stmt.def_var)
        for used in stmt.uses:
            new_in.add(used)
        if new_in == in_fact:
            return False
        in_fact.set_to(new_in)
        return True
