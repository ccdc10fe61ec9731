#!/usr/bin/env python3
# Copyright 2026 The MistForge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the planted-signal corpora under tests/data.

Samples labeled "llm" favour descriptive names, for loops, compound
assignment, if/else and inline literal arguments; "human" samples favour
short names and the opposite structural forms. Output is deterministic.

  python3 make_corpus.py [outdir]
"""

import json
import os
import random
import sys

OWN_STYLE = 0.85
OWN_NAMES = 0.8

NAMES = {
    "acc": (["s", "t", "tot", "sm", "acc"],
            ["total", "total_sum", "running_total", "accumulated", "result_sum"]),
    "item": (["x", "v", "e", "it", "y"],
             ["value", "element", "current_item", "item_value", "number"]),
    "idx": (["i", "j", "k", "ix", "p"],
            ["index", "position", "loop_index", "counter_idx", "cursor"]),
    "arr": (["a", "xs", "arr", "lst", "nums"],
            ["numbers", "input_list", "values_list", "data_items", "elements"]),
    "cnt": (["c", "cnt", "nc", "m", "q"],
            ["count", "match_count", "hit_count", "num_matches", "tally"]),
    "text": (["st", "w", "txt", "ss", "src"],
             ["text", "input_text", "message", "content", "sentence"]),
    "ch": (["ch", "cc", "z", "ct", "r"],
           ["character", "current_char", "letter", "symbol", "char_value"]),
    "lim": (["n", "lim", "hi", "top", "mx"],
            ["limit", "upper_bound", "max_value", "threshold", "boundary"]),
    "res": (["res", "out", "r0", "ans", "rv"],
            ["result", "output", "final_result", "answer", "computed_value"]),
    "tag": (["lb", "tg", "nm", "hd", "pf"],
            ["label", "prefix", "header", "caption", "title_text"]),
    "tmp": (["tmp", "tp", "t2", "aux", "h"],
            ["temp_value", "swap_holder", "previous", "saved_value", "holder"]),
}

FUNC_NAMES = {
    "sum_evens": (["sev", "se", "evsum"], ["compute_even_sum", "sum_even_numbers", "helper_fn"]),
    "count_char": (["cc_of", "chcnt", "nch"], ["count_character", "count_occurrences", "helper_fn"]),
    "factorial": (["fac", "fct", "fa"], ["compute_factorial", "calculate_factorial", "helper_fn"]),
    "max_of": (["mx_of", "big", "mo"], ["find_maximum", "get_max_value", "helper_fn"]),
    "fib": (["fb", "fibo", "fi"], ["compute_fibonacci", "fibonacci_number", "helper_fn"]),
    "digits": (["dsum", "ds", "dg"], ["sum_of_digits", "compute_digit_sum", "helper_fn"]),
    "clamp_all": (["cl", "clp", "cap"], ["clamp_values", "apply_clamp", "helper_fn"]),
    "vowels": (["nv", "vw", "vc"], ["count_vowels", "vowel_count", "helper_fn"]),
    "gcd": (["g", "gd", "hcf"], ["greatest_common_divisor", "compute_gcd", "helper_fn"]),
    "above": (["ab", "over", "nab"], ["count_above_threshold", "values_above", "helper_fn"]),
    "primes": (["np", "pc", "prm"], ["count_primes", "prime_counter", "helper_fn"]),
    "squares": (["sq", "ssq", "sqs"], ["sum_of_squares", "square_total", "helper_fn"]),
}

JAVA_FUNC_NAMES = {
    key: ([h.replace("_", "") for h in hs], [to_camel for to_camel in
          ["".join(w.capitalize() if i else w for i, w in enumerate(n.split("_")))
           for n in ls]])
    for key, (hs, ls) in FUNC_NAMES.items()
}


def camel(name):
    parts = name.split("_")
    return parts[0] + "".join(p.capitalize() for p in parts[1:])


class Style:
    def __init__(self, rng, label, language):
        llm = label == "llm"
        own = lambda: rng.random() < OWN_STYLE
        self.rng = rng
        self.llm = llm
        self.language = language
        self.for_loop = own() if llm else not own()
        self.compound = own() if llm else not own()
        self.if_else = own() if llm else not own()
        self.inline_const = own() if llm else not own()
        self.postfix = own() if llm else not own()
        self.used = set()

    def name(self, role):
        human, llm = NAMES[role]
        pool = llm if (self.rng.random() < OWN_NAMES) == self.llm else human
        return self._fresh(pool)

    def func(self, key):
        table = JAVA_FUNC_NAMES if self.language == "java" else FUNC_NAMES
        human, llm = table[key]
        pool = llm if (self.rng.random() < OWN_NAMES) == self.llm else human
        return self._fresh(pool)

    def _fresh(self, pool):
        options = [p for p in pool if p not in self.used]
        pick = self.rng.choice(options)
        self.used.add(pick)
        if self.language == "java":
            pick = camel(pick)
        return pick


def indent(lines, n):
    return [" " * n + l if l else l for l in lines]


# Python ------------------------------------------------------------------

def py_add(st, var, expr):
    if st.compound:
        return f"{var} += {expr}"
    if any(c in expr for c in "+-*/% "):
        expr = f"({expr})"
    return f"{var} = {var} + {expr}"


def py_inc(st, var):
    return py_add(st, var, "1")


def py_each(st, item, seq, body):
    """Loop over a list, as for-each or as an index while loop."""
    if st.for_loop:
        return [f"for {item} in {seq}:"] + indent(body, 4)
    idx = st.name("idx")
    return ([f"{idx} = 0", f"while {idx} < len({seq}):",
             f"    {item} = {seq}[{idx}]"] + indent(body, 4) +
            ["    " + py_inc(st, idx)])


def py_range(st, var, start, stop, body):
    if st.for_loop:
        rng = f"range({stop})" if start == "0" else f"range({start}, {stop})"
        return [f"for {var} in {rng}:"] + indent(body, 4)
    return ([f"{var} = {start}", f"while {var} < {stop}:"] + indent(body, 4) +
            ["    " + py_inc(st, var)])


def py_branch(st, cond, then, other):
    if st.if_else:
        return [f"if {cond}:"] + indent(then, 4) + ["else:"] + indent(other, 4)
    return ([f"if {cond}:"] + indent(then, 4) + [f"if not ({cond}):"] +
            indent(other, 4))


def py_report(st, literal, call):
    if st.inline_const:
        return [f"print({literal}, {call})"]
    tag = st.name("tag")
    return [f"{tag} = {literal}", f"print({tag}, {call})"]


def py_sum_evens(st, rng):
    f, arr, acc, item, cnt = (st.func("sum_evens"), st.name("arr"),
                              st.name("acc"), st.name("item"), st.name("cnt"))
    body = py_branch(st, f"{item} % 2 == 0", [py_add(st, acc, item)],
                     [py_inc(st, cnt)])
    data = [rng.randint(1, 40) for _ in range(rng.randint(4, 8))]
    lines = ([f"def {f}({arr}):", f"    {acc} = 0", f"    {cnt} = 0"] +
             indent(py_each(st, item, arr, body), 4) +
             [f"    return {acc} * 100 + {cnt}", ""] +
             py_report(st, '"even sum:"', f"{f}({data})"))
    return lines


def py_count_char(st, rng):
    f, text, ch, cnt, target = (st.func("count_char"), st.name("text"),
                                st.name("ch"), st.name("cnt"), st.name("tmp"))
    body = py_branch(st, f"{ch} == {target}", [py_inc(st, cnt)], ["pass"])
    word = rng.choice(["banana", "mississippi", "abracadabra", "committee"])
    letter = rng.choice(sorted(set(word)))
    lines = ([f"def {f}({text}, {target}):", f"    {cnt} = 0"] +
             indent(py_each(st, ch, text, body), 4) +
             [f"    return {cnt}", ""] +
             py_report(st, '"count:"', f'{f}("{word}", "{letter}")'))
    return lines


def py_factorial(st, rng):
    f, lim, res, idx = (st.func("factorial"), st.name("lim"), st.name("res"),
                        st.name("idx"))
    if st.compound:
        upd = f"{res} *= {idx}"
    else:
        upd = f"{res} = {res} * {idx}"
    lines = ([f"def {f}({lim}):", f"    {res} = 1"] +
             indent(py_range(st, idx, "1", f"{lim} + 1", [upd]), 4) +
             [f"    return {res}", ""] +
             py_report(st, '"factorial:"', f"{f}({rng.randint(3, 9)})"))
    return lines


def py_max_of(st, rng):
    f, arr, res, item = (st.func("max_of"), st.name("arr"), st.name("res"),
                         st.name("item"))
    body = py_branch(st, f"{item} > {res}", [f"{res} = {item}"], ["pass"])
    data = [rng.randint(-20, 60) for _ in range(rng.randint(4, 8))]
    lines = ([f"def {f}({arr}):", f"    {res} = {arr}[0]"] +
             indent(py_each(st, item, arr, body), 4) +
             [f"    return {res}", ""] +
             py_report(st, '"max:"', f"{f}({data})"))
    return lines


def py_fib(st, rng):
    f, lim, a, b, tmp, idx = (st.func("fib"), st.name("lim"), st.name("res"),
                              st.name("acc"), st.name("tmp"), st.name("idx"))
    body = [f"{tmp} = {a} + {b}", f"{a} = {b}", f"{b} = {tmp}"]
    lines = ([f"def {f}({lim}):", f"    {a} = 0", f"    {b} = 1"] +
             indent(py_range(st, idx, "0", lim, body), 4) +
             [f"    return {a}", ""] +
             py_report(st, '"fib:"', f"{f}({rng.randint(5, 20)})"))
    return lines


def py_digits(st, rng):
    f, lim, acc, d = (st.func("digits"), st.name("lim"), st.name("acc"),
                      st.name("tmp"))
    lines = [f"def {f}({lim}):", f"    {acc} = 0", f"    while {lim} > 0:",
             f"        {d} = {lim} % 10", "        " + py_add(st, acc, d),
             f"        {lim} = {lim} // 10", f"    return {acc}", ""]
    lines += py_report(st, '"digit sum:"', f"{f}({rng.randint(100, 99999)})")
    return lines


def py_clamp_all(st, rng):
    f, arr, lim, res, item = (st.func("clamp_all"), st.name("arr"),
                              st.name("lim"), st.name("res"), st.name("item"))
    body = py_branch(st, f"{item} > {lim}", [f"{res}.append({lim})"],
                     [f"{res}.append({item})"])
    data = [rng.randint(0, 30) for _ in range(rng.randint(4, 7))]
    lines = ([f"def {f}({arr}, {lim}):", f"    {res} = []"] +
             indent(py_each(st, item, arr, body), 4) +
             [f"    return {res}", ""] +
             py_report(st, '"clamped:"', f"{f}({data}, {rng.randint(10, 20)})"))
    return lines


def py_vowels(st, rng):
    f, text, ch, cnt, other = (st.func("vowels"), st.name("text"),
                               st.name("ch"), st.name("cnt"), st.name("acc"))
    body = py_branch(st, f'{ch} in "aeiou"', [py_inc(st, cnt)],
                     [py_inc(st, other)])
    word = rng.choice(["education", "rhythm", "sequoia", "strengths", "queue"])
    lines = ([f"def {f}({text}):", f"    {cnt} = 0", f"    {other} = 0"] +
             indent(py_each(st, ch, text, body), 4) +
             [f"    return {cnt} * 10 + {other}", ""] +
             py_report(st, '"vowels:"', f'{f}("{word}")'))
    return lines


def py_gcd(st, rng):
    f, a, b, tmp = (st.func("gcd"), st.name("lim"), st.name("res"),
                    st.name("tmp"))
    lines = [f"def {f}({a}, {b}):", f"    while {b} != 0:",
             f"        {tmp} = {b}", f"        {b} = {a} % {b}",
             f"        {a} = {tmp}", f"    return {a}", ""]
    x, y = rng.randint(10, 200), rng.randint(10, 200)
    lines += py_report(st, '"gcd:"', f"{f}({x}, {y})")
    return lines


def py_above(st, rng):
    f, arr, lim, cnt, item, acc = (st.func("above"), st.name("arr"),
                                   st.name("lim"), st.name("cnt"),
                                   st.name("item"), st.name("acc"))
    body = py_branch(st, f"{item} > {lim}", [py_inc(st, cnt)],
                     [py_add(st, acc, item)])
    data = [rng.randint(0, 50) for _ in range(rng.randint(4, 8))]
    lines = ([f"def {f}({arr}, {lim}):", f"    {cnt} = 0", f"    {acc} = 0"] +
             indent(py_each(st, item, arr, body), 4) +
             [f"    return ({cnt}, {acc})", ""] +
             py_report(st, '"above:"', f"{f}({data}, {rng.randint(10, 30)})"))
    return lines


def py_primes(st, rng):
    f, lim, cnt, idx, d, flag = (st.func("primes"), st.name("lim"),
                                 st.name("cnt"), st.name("idx"),
                                 st.name("item"), st.name("tmp"))
    inner = [f"{flag} = True"] + py_range(
        st, d, "2", idx, py_branch(st, f"{idx} % {d} == 0",
                                   [f"{flag} = False"], ["pass"]))
    inner += [f"if {flag}:", "    " + py_inc(st, cnt)]
    lines = ([f"def {f}({lim}):", f"    {cnt} = 0"] +
             indent(py_range(st, idx, "2", lim, inner), 4) +
             [f"    return {cnt}", ""] +
             py_report(st, '"primes:"', f"{f}({rng.randint(10, 40)})"))
    return lines


def py_squares(st, rng):
    f, lim, acc, idx = (st.func("squares"), st.name("lim"), st.name("acc"),
                        st.name("idx"))
    lines = ([f"def {f}({lim}):", f"    {acc} = 0"] +
             indent(py_range(st, idx, "1", f"{lim} + 1",
                             [py_add(st, acc, f"{idx} * {idx}")]), 4) +
             [f"    return {acc}", ""] +
             py_report(st, '"squares:"', f"{f}({rng.randint(3, 12)})"))
    return lines


PY_TEMPLATES = [py_sum_evens, py_count_char, py_factorial, py_max_of, py_fib,
                py_digits, py_clamp_all, py_vowels, py_gcd, py_above,
                py_primes, py_squares]


# Java --------------------------------------------------------------------

def j_add(st, var, expr):
    if st.compound:
        return f"{var} += {expr};"
    if any(c in expr for c in "+-*/% "):
        expr = f"({expr})"
    return f"{var} = {var} + {expr};"


def j_inc(st, var):
    if st.postfix:
        return f"{var}++;"
    return f"{var} = {var} + 1;"


def j_inc_expr(st, var):
    return f"{var}++" if st.postfix else f"{var} = {var} + 1"


def j_range(st, var, start, stop, body):
    if st.for_loop:
        return ([f"for (int {var} = {start}; {var} < {stop}; "
                 f"{j_inc_expr(st, var)}) {{"] + indent(body, 4) + ["}"])
    return ([f"int {var} = {start};", f"while ({var} < {stop}) {{"] +
            indent(body, 4) + ["    " + j_inc(st, var), "}"])


def j_branch(st, cond, then, other):
    if st.if_else:
        return ([f"if ({cond}) {{"] + indent(then, 4) + ["} else {"] +
                indent(other, 4) + ["}"])
    return ([f"if ({cond}) {{"] + indent(then, 4) + ["}"] +
            [f"if (!({cond})) {{"] + indent(other, 4) + ["}"])


def j_report(st, literal, call):
    if st.inline_const:
        return [f"report({literal}, {call});"]
    tag = st.name("tag")
    return [f"String {tag} = {literal};", f"report({tag}, {call});"]


def j_class(st, rng, method, main_call):
    cls = rng.choice(["Solution", "Main", "Task", "Program"])
    return ([f"public class {cls} {{",
             "    static void report(String tag, long value) {",
             "        System.out.println(tag + \" \" + value);",
             "    }", ""] + indent(method, 4) + [""] +
            ["    public static void main(String[] args) {"] +
            indent(main_call, 8) + ["    }", "}"])


def j_array(rng, lo, hi, n):
    return "new int[] {" + ", ".join(str(rng.randint(lo, hi)) for _ in range(n)) + "}"


def j_sum_evens(st, rng):
    f, arr, acc, idx, cnt = (st.func("sum_evens"), st.name("arr"),
                             st.name("acc"), st.name("idx"), st.name("cnt"))
    body = j_branch(st, f"{arr}[{idx}] % 2 == 0", [j_add(st, acc, f"{arr}[{idx}]")],
                    [j_inc(st, cnt)])
    method = ([f"static int {f}(int[] {arr}) {{", f"    int {acc} = 0;",
               f"    int {cnt} = 0;"] +
              indent(j_range(st, idx, "0", f"{arr}.length", body), 4) +
              [f"    return {acc} * 100 + {cnt};", "}"])
    return j_class(st, rng, method, j_report(
        st, '"even sum:"', f"{f}({j_array(rng, 1, 40, rng.randint(4, 8))})"))


def j_count_char(st, rng):
    f, text, idx, cnt, target, other = (
        st.func("count_char"), st.name("text"), st.name("idx"),
        st.name("cnt"), st.name("ch"), st.name("acc"))
    body = j_branch(st, f"{text}.charAt({idx}) == {target}", [j_inc(st, cnt)],
                    [j_inc(st, other)])
    method = ([f"static int {f}(String {text}, char {target}) {{",
               f"    int {cnt} = 0;", f"    int {other} = 0;"] +
              indent(j_range(st, idx, "0", f"{text}.length()", body), 4) +
              [f"    return {cnt} * 100 + {other};", "}"])
    word = rng.choice(["banana", "mississippi", "abracadabra", "committee"])
    return j_class(st, rng, method, j_report(
        st, '"count:"', f"{f}(\"{word}\", '{rng.choice(sorted(set(word)))}')"))


def j_factorial(st, rng):
    f, lim, res, idx = (st.func("factorial"), st.name("lim"), st.name("res"),
                        st.name("idx"))
    upd = f"{res} *= {idx};" if st.compound else f"{res} = {res} * {idx};"
    method = ([f"static long {f}(int {lim}) {{", f"    long {res} = 1;"] +
              indent(j_range(st, idx, "1", f"{lim} + 1", [upd]), 4) +
              [f"    return {res};", "}"])
    return j_class(st, rng, method, j_report(
        st, '"factorial:"', f"{f}({rng.randint(3, 12)})"))


def j_max_of(st, rng):
    f, arr, res, idx, tmp, cnt = (st.func("max_of"), st.name("arr"),
                                  st.name("res"), st.name("idx"),
                                  st.name("tmp"), st.name("cnt"))
    body = [f"int {tmp} = {arr}[{idx}];"] + j_branch(
        st, f"{tmp} > {res}", [f"{res} = {tmp};"], [j_inc(st, cnt)])
    method = ([f"static int {f}(int[] {arr}) {{", f"    int {res} = {arr}[0];",
               f"    int {cnt} = 0;"] +
              indent(j_range(st, idx, "1", f"{arr}.length", body), 4) +
              [f"    return {res} * 100 + {cnt};", "}"])
    return j_class(st, rng, method, j_report(
        st, '"max:"', f"{f}({j_array(rng, -20, 60, rng.randint(4, 8))})"))


def j_fib(st, rng):
    f, lim, a, b, tmp, idx = (st.func("fib"), st.name("lim"), st.name("res"),
                              st.name("acc"), st.name("tmp"), st.name("idx"))
    body = [f"long {tmp} = {a} + {b};", f"{a} = {b};", f"{b} = {tmp};"]
    method = ([f"static long {f}(int {lim}) {{", f"    long {a} = 0;",
               f"    long {b} = 1;"] +
              indent(j_range(st, idx, "0", lim, body), 4) +
              [f"    return {a};", "}"])
    return j_class(st, rng, method, j_report(
        st, '"fib:"', f"{f}({rng.randint(5, 40)})"))


def j_digits(st, rng):
    f, lim, acc = st.func("digits"), st.name("lim"), st.name("acc")
    method = [f"static int {f}(int {lim}) {{", f"    int {acc} = 0;",
              f"    while ({lim} > 0) {{", "        " + j_add(st, acc, f"{lim} % 10"),
              f"        {lim} = {lim} / 10;", "    }", f"    return {acc};", "}"]
    return j_class(st, rng, method, j_report(
        st, '"digit sum:"', f"{f}({rng.randint(100, 99999)})"))


def j_vowels(st, rng):
    f, text, idx, cnt, ch, other = (st.func("vowels"), st.name("text"),
                                    st.name("idx"), st.name("cnt"),
                                    st.name("ch"), st.name("acc"))
    body = [f"char {ch} = {text}.charAt({idx});"] + j_branch(
        st, f"\"aeiou\".indexOf({ch}) >= 0", [j_inc(st, cnt)],
        [j_inc(st, other)])
    method = ([f"static int {f}(String {text}) {{", f"    int {cnt} = 0;",
               f"    int {other} = 0;"] +
              indent(j_range(st, idx, "0", f"{text}.length()", body), 4) +
              [f"    return {cnt} * 10 + {other};", "}"])
    word = rng.choice(["education", "rhythm", "sequoia", "strengths", "queue"])
    return j_class(st, rng, method, j_report(st, '"vowels:"', f'{f}("{word}")'))


def j_gcd(st, rng):
    f, a, b, tmp = st.func("gcd"), st.name("lim"), st.name("res"), st.name("tmp")
    method = [f"static int {f}(int {a}, int {b}) {{", f"    while ({b} != 0) {{",
              f"        int {tmp} = {b};", f"        {b} = {a} % {b};",
              f"        {a} = {tmp};", "    }", f"    return {a};", "}"]
    return j_class(st, rng, method, j_report(
        st, '"gcd:"', f"{f}({rng.randint(10, 200)}, {rng.randint(10, 200)})"))


def j_above(st, rng):
    f, arr, lim, cnt, idx, acc = (st.func("above"), st.name("arr"),
                                  st.name("lim"), st.name("cnt"),
                                  st.name("idx"), st.name("acc"))
    body = j_branch(st, f"{arr}[{idx}] > {lim}", [j_inc(st, cnt)],
                    [j_add(st, acc, f"{arr}[{idx}]")])
    method = ([f"static int {f}(int[] {arr}, int {lim}) {{", f"    int {cnt} = 0;",
               f"    int {acc} = 0;"] +
              indent(j_range(st, idx, "0", f"{arr}.length", body), 4) +
              [f"    return {cnt} * 1000 + {acc};", "}"])
    return j_class(st, rng, method, j_report(
        st, '"above:"',
        f"{f}({j_array(rng, 0, 50, rng.randint(4, 8))}, {rng.randint(10, 30)})"))


def j_primes(st, rng):
    f, lim, cnt, idx, d, flag, other = (st.func("primes"), st.name("lim"),
                                        st.name("cnt"), st.name("idx"),
                                        st.name("item"), st.name("tmp"),
                                        st.name("acc"))
    inner = [f"boolean {flag} = true;"] + j_range(
        st, d, "2", idx, j_branch(st, f"{idx} % {d} == 0",
                                  [f"{flag} = false;"], [j_inc(st, other)]))
    inner += [f"if ({flag}) {{", "    " + j_inc(st, cnt), "}"]
    method = ([f"static int {f}(int {lim}) {{", f"    int {cnt} = 0;",
               f"    int {other} = 0;"] +
              indent(j_range(st, idx, "2", lim, inner), 4) +
              [f"    return {cnt} * 1000 + {other};", "}"])
    return j_class(st, rng, method, j_report(
        st, '"primes:"', f"{f}({rng.randint(10, 40)})"))


def j_squares(st, rng):
    f, lim, acc, idx = (st.func("squares"), st.name("lim"), st.name("acc"),
                        st.name("idx"))
    method = ([f"static long {f}(int {lim}) {{", f"    long {acc} = 0;"] +
              indent(j_range(st, idx, "1", f"{lim} + 1",
                             [j_add(st, acc, f"{idx} * {idx}")]), 4) +
              [f"    return {acc};", "}"])
    return j_class(st, rng, method, j_report(
        st, '"squares:"', f"{f}({rng.randint(3, 12)})"))


def j_clamp_all(st, rng):
    f, arr, lim, res, idx = (st.func("clamp_all"), st.name("arr"),
                             st.name("lim"), st.name("res"), st.name("idx"))
    body = j_branch(st, f"{arr}[{idx}] > {lim}", [f"{res}[{idx}] = {lim};"],
                    [f"{res}[{idx}] = {arr}[{idx}];"])
    method = ([f"static int[] {f}(int[] {arr}, int {lim}) {{",
               f"    int[] {res} = new int[{arr}.length];"] +
              indent(j_range(st, idx, "0", f"{arr}.length", body), 4) +
              [f"    return {res};", "}"])
    return j_class(st, rng, method, j_report(
        st, '"clamped:"',
        f"{f}({j_array(rng, 0, 30, rng.randint(4, 7))}, {rng.randint(10, 20)}).length"))


J_TEMPLATES = [j_sum_evens, j_count_char, j_factorial, j_max_of, j_fib,
               j_digits, j_vowels, j_gcd, j_above, j_primes, j_squares,
               j_clamp_all]


def generate(seed, count, language, prefix):
    rng = random.Random(seed)
    templates = PY_TEMPLATES if language == "python" else J_TEMPLATES
    out = []
    for n in range(count):
        label = "llm" if n % 2 else "human"
        template = templates[rng.randrange(len(templates))]
        st = Style(rng, label, language)
        code = "\n".join(template(st, rng)) + "\n"
        out.append({"id": f"{prefix}-{language[:2]}-{n:04d}",
                    "language": language, "label": label, "code": code})
    return out


def write(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, sort_keys=True) + "\n")


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(
        os.path.abspath(__file__))
    train = generate(101, 600, "java", "train") + generate(202, 600, "python", "train")
    write(os.path.join(outdir, "train.jsonl"), train)
    write(os.path.join(outdir, "fixtures_java.jsonl"),
          generate(303, 50, "java", "fix"))
    write(os.path.join(outdir, "fixtures_python.jsonl"),
          generate(404, 50, "python", "fix"))


if __name__ == "__main__":
    main()
