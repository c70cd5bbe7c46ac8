"""
IR 模块
类 Java 三地址中间表示：类型、语句、程序实体与类层次
"""
from .hierarchy import Hierarchy
from .program import (ClassDecl, ExceptionEntry, FieldDecl, MethodBody, MethodDecl,
                      Program, RelevantStmts, ResultHolder)
from .refs import FieldRef, Literal, MethodRef, MethodSignature, Var
from .stmts import (AssignLiteral, Binary, BinaryOp, Cast, Catch, ConditionOp, Copy, Goto,
                    If, Invoke, InvokeKind, LoadArray, LoadField, New, Nop, Return, Stmt,
                    StmtVisitor, StoreArray, StoreField, Switch, Throw, Unary, UnaryOp)
from .types import (ArrayType, BOOLEAN, ClassType, INT, NULL, NullType, OBJECT, PrimitiveType,
                    STRING, SemType, THROWABLE, VOID, VoidType, parse_type_name)
