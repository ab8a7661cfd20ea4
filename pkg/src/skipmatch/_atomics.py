"""Byte-wide atomic primitives usable from numba ``nopython`` code.

numba exposes no CPU-side compare-and-swap, so these intrinsics emit the
LLVM atomic instructions directly. All accessors operate on 1-D ``uint8``
arrays and skip bounds/wraparound handling; callers guarantee the index.

Memory ordering:

* ``cas_u8``   - acq_rel on success, acquire on failure
* ``load_u8``  - acquire
* ``store_u8`` - release
"""

import platform

from llvmlite import ir
from numba import types
from numba.core import cgutils
from numba.extending import intrinsic

_X86 = platform.machine().lower() in ("x86_64", "amd64", "i686", "i386")


def _item_pointer(context, builder, arr_t, arr, idx):
    aryobj = context.make_array(arr_t)(context, builder, arr)
    return cgutils.get_item_pointer(context, builder, arr_t, aryobj, [idx], wraparound=False)


@intrinsic
def cas_u8(typingctx, arr, idx, expected, desired):
    """Atomically replace ``arr[idx]`` with ``desired`` if it equals ``expected``."""
    sig = types.boolean(arr, idx, types.uint8, types.uint8)

    def codegen(context, builder, signature, args):
        ptr = _item_pointer(context, builder, signature.args[0], args[0], args[1])
        old = context.cast(builder, args[2], signature.args[2], types.uint8)
        new = context.cast(builder, args[3], signature.args[3], types.uint8)
        res = builder.cmpxchg(ptr, old, new, "acq_rel", "acquire")
        return builder.extract_value(res, 1)

    return sig, codegen


@intrinsic
def load_u8(typingctx, arr, idx):
    sig = types.uint8(arr, idx)

    def codegen(context, builder, signature, args):
        ptr = _item_pointer(context, builder, signature.args[0], args[0], args[1])
        return builder.load_atomic(ptr, "acquire", 1)

    return sig, codegen


@intrinsic
def store_u8(typingctx, arr, idx, value):
    sig = types.void(arr, idx, types.uint8)

    def codegen(context, builder, signature, args):
        ptr = _item_pointer(context, builder, signature.args[0], args[0], args[1])
        val = context.cast(builder, args[2], signature.args[2], types.uint8)
        builder.store_atomic(val, ptr, "release", 1)
        return context.get_dummy_value()

    return sig, codegen


@intrinsic
def cpu_relax(typingctx):
    """Spin-loop hint (``pause`` on x86, no-op elsewhere)."""
    sig = types.void()

    def codegen(context, builder, signature, args):
        if _X86:
            fnty = ir.FunctionType(ir.VoidType(), [])
            fn = cgutils.get_or_insert_function(builder.module, fnty, "llvm.x86.sse2.pause")
            builder.call(fn, [])
        return context.get_dummy_value()

    return sig, codegen


@intrinsic
def sched_yield(typingctx):
    """Give up the CPU to the OS scheduler (libc ``sched_yield``)."""
    sig = types.void()

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(ir.IntType(32), [])
        fn = cgutils.get_or_insert_function(builder.module, fnty, "sched_yield")
        builder.call(fn, [])
        return context.get_dummy_value()

    return sig, codegen
