#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "convlint/parser.hpp"
#include "convlint/report_io.hpp"
#include "convlint/rules.hpp"

using namespace convlint;

namespace {

Facts facts_of(const std::vector<std::string>& sources, const RuleConfig& cfg = {}) {
    std::vector<CompilationUnit> units;
    int n = 0;
    for (const std::string& s : sources) {
        units.push_back(parse_unit(s, "unit" + std::to_string(n++) + ".minij"));
    }
    return extract_facts(units, cfg);
}

std::vector<std::string> rule_ids(const std::vector<Finding>& findings) {
    std::vector<std::string> ids;
    for (const Finding& f : findings) ids.push_back(f.rule_id);
    return ids;
}

} // namespace

TEST_CASE("MUT01 fires on mutator calls through immutable names") {
    RuleConfig cfg;
    Facts f = facts_of({
        "package fb6.user.lg;\n"
        "class Person {\n"
        "    void setName(final String name) {}\n"
        "    void promoteMut() {}\n"
        "}\n"
        "class PersonClient {\n"
        "    void demo(final Person person, final Person personMut) {\n"
        "        personMut.setName(\"Otto\");\n"
        "        personMut.promoteMut();\n"
        "        person.setName(\"Otto\");\n"
        "        person.promoteMut();\n"
        "    }\n"
        "}\n",
    }, cfg);
    std::vector<Finding> findings = check_mutator_calls(f, cfg);
    REQUIRE(findings.size() == 2);
    CHECK(findings[0].location.line == 10);
    CHECK(findings[1].location.line == 11);
    CHECK(findings[0].message == "Illegal mutator call on an immutable reference");
    CHECK(findings[0].params.empty());
}

TEST_CASE("MUT01 this-receiver calls depend on the enclosing method") {
    RuleConfig cfg;
    Facts f = facts_of({
        "package p;\n"
        "class A {\n"
        "    A() { clearMut(); }\n"               // constructor: allowed
        "    void resetMut() { clearMut(); }\n"   // mutator: allowed
        "    void report() { clearMut(); }\n"     // plain method: finding
        "    void clearMut() {}\n"
        "}\n",
    }, cfg);
    std::vector<Finding> findings = check_mutator_calls(f, cfg);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].location.line == 5);
}

TEST_CASE("MUT01 exemptions: fresh objects, static types, call results, unknowns") {
    RuleConfig cfg;
    Facts f = facts_of({
        "package p;\n"
        "import q.Util;\n"
        "class Person { void setName(final String n) {} }\n"
        "class A {\n"
        "    private Person helper;\n"
        "    private Person helperMut;\n"
        "    void m(final Person pMut) {\n"
        "        new Person().setName(\"x\");\n"
        "        Util.setGlobal(\"x\");\n"
        "        find().setName(\"x\");\n"
        "        mystery.setName(\"x\");\n"
        "        pMut.setName(\"x\");\n"
        "        helperMut.setName(\"x\");\n"
        "        helper.setName(\"x\");\n"
        "    }\n"
        "}\n",
    }, cfg);
    std::vector<Finding> findings = check_mutator_calls(f, cfg);
    // only the non-Mut field receiver violates
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].location.line == 14);
}

TEST_CASE("MUT02 flags own-field replacement outside mutators and constructors") {
    RuleConfig cfg;
    Facts f = facts_of({
        "package fb6.user.lg;\n"
        "class Person {\n"
        "    private String name;\n"
        "    Person(final String name) { this.name = name; }\n"
        "    void setName(final String name) { this.name = name; }\n"
        "    void printSalary() {\n"
        "        this.name = \"Otto\";\n"
        "        String local = \"x\";\n"
        "        local = \"y\";\n"
        "    }\n"
        "}\n",
    }, cfg);
    std::vector<Finding> findings = check_field_assignments(f, cfg);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].location.line == 7);
    CHECK(findings[0].params == std::vector<std::string>{"name", "printSalary"});
    CHECK(findings[0].message == "Field name replaced in non-mutator method printSalary");
}

TEST_CASE("ARCH01 permits same-layer and one-step-down calls only") {
    RuleConfig cfg;
    auto violations = [&](const std::string& caller_pkg, const std::string& callee_pkg) {
        Facts f = facts_of({
            "package " + caller_pkg + ";\n"
            "import " + callee_pkg + ".Target;\n"
            "class Caller { void m(final Target t) { t.hit(); } }\n",
            "package " + callee_pkg + "; class Target { void hit() {} }\n",
        }, cfg);
        return check_layering(f, cfg).size();
    };
    CHECK(violations("fb6.user.ui", "fb6.user.lg") == 0);
    CHECK(violations("fb6.user.lg", "fb6.user.db") == 0);
    CHECK(violations("fb6.user.ui", "fb6.pay.ui") == 0);  // same layer
    CHECK(violations("fb6.user.ui", "fb6.user.db") == 1); // skips a layer
    CHECK(violations("fb6.user.db", "fb6.user.ui") == 1); // upward
    CHECK(violations("fb6.user.db", "fb6.user.lg") == 1); // upward one step
    CHECK(violations("fb6.user.lg", "fb6.user.ui") == 1);
    // packages outside the root.component.layer shape are not judged
    CHECK(violations("other.user.ui", "fb6.user.db") == 0);
    CHECK(violations("fb6.user.ui", "fb6.user.db.sub") == 0);
    CHECK(violations("fb6.user.misc", "fb6.user.db") == 0);
}

TEST_CASE("ARCH01 message and location") {
    RuleConfig cfg;
    Facts f = facts_of({
        "package fb6.finance.ui;\n"
        "import fb6.finance.db.BudgetDao;\n"
        "class FinanceView {\n"
        "    void show(final BudgetDao dao) {\n"
        "        dao.load();\n"
        "    }\n"
        "}\n",
        "package fb6.finance.db; class BudgetDao { void load() {} }\n",
    }, cfg);
    std::vector<Finding> findings = check_layering(f, cfg);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].message == "Do not call the db-layer directly");
    CHECK(findings[0].location.line == 5);
    CHECK(findings[0].location.column == 13);
}

namespace {

std::vector<Finding> isolation_for(const std::string& caller_pkg, const std::string& callee_pkg,
                                   const RuleConfig& cfg = {}) {
    Facts f = facts_of({
        "package " + caller_pkg + ";\n"
        "import " + callee_pkg + ".Target;\n"
        "class Caller { void m(final Target t) { t.hit(); } }\n",
        "package " + callee_pkg + "; class Target { void hit() {} }\n",
    }, cfg);
    return check_component_isolation(f, cfg);
}

} // namespace

TEST_CASE("ARCH02 flags product components calling foreign product components") {
    std::vector<Finding> findings = isolation_for("fb6.user.lg", "fb6.finance.lg");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].rule_id == "ARCH02");
    CHECK(findings[0].params == std::vector<std::string>{"user", "finance"});
    CHECK(findings[0].message == "Component user must not call component finance");
}

TEST_CASE("ARCH02 stays quiet within a component and towards the service component") {
    CHECK(isolation_for("fb6.user.lg", "fb6.user.db").empty());
    CHECK(isolation_for("fb6.user.lg", "fb6.service.lg").empty());
    CHECK(isolation_for("other.user.lg", "fb6.finance.lg").empty());
    CHECK(isolation_for("fb6.user.lg", "external.finance.lg").empty());
}

TEST_CASE("ARCH03 flags the service component calling product components") {
    std::vector<Finding> findings = isolation_for("fb6.service.lg", "fb6.user.lg");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].rule_id == "ARCH03");
    CHECK(findings[0].params.empty());
    CHECK(findings[0].message == "Do not call a product component from the service component");
    CHECK(isolation_for("fb6.service.lg", "fb6.service.db").empty());
}

TEST_CASE("component checks work on deep packages") {
    std::vector<Finding> findings = isolation_for("fb6.user.lg.impl", "fb6.finance.api.v2");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].params == std::vector<std::string>{"user", "finance"});
}

TEST_CASE("one finding per call even with several pattern bindings") {
    RuleConfig cfg;
    // caller and callee both deep enough that the `..` has room to wander
    Facts f = facts_of({
        "package fb6.user.a.b;\n"
        "import fb6.finance.x.y.Target;\n"
        "class Caller { void m(final Target t) { t.hit(); } }\n",
        "package fb6.finance.x.y; class Target { void hit() {} }\n",
    }, cfg);
    std::vector<Finding> findings = check_component_isolation(f, cfg);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].params == std::vector<std::string>{"user", "finance"});
}

TEST_CASE("EXC01 requires the thrown convention exception to be declared") {
    RuleConfig cfg;
    std::string corpus =
        "package fb6.person.lg;\n"
        "class UsernameNullExc extends multex.Exc { }\n"
        "class PersonService {\n"
        "    Person getPersonByUsername(final String username) throws PersonNotFoundExc {\n"
        "        if (username == null) {\n"
        "            throw new UsernameNullExc();\n"
        "        }\n"
        "        return null;\n"
        "    }\n"
        "}\n";
    Facts f = facts_of({corpus}, cfg);
    std::vector<Finding> findings = check_undeclared_exc_throws(f, cfg);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].params ==
          std::vector<std::string>{"fb6.person.lg.UsernameNullExc", "getPersonByUsername"});
    CHECK(findings[0].message ==
          "Exception fb6.person.lg.UsernameNullExc thrown but not declared in the throws "
          "clause of getPersonByUsername");
    CHECK(findings[0].location.line == 6);
}

TEST_CASE("EXC01 exemptions") {
    RuleConfig cfg;
    SECTION("declared exactly: no finding") {
        Facts f = facts_of({
            "package p;\n"
            "class NullExc extends multex.Exc { }\n"
            "class S { void m() throws NullExc { throw new NullExc(); } }\n",
        }, cfg);
        CHECK(check_undeclared_exc_throws(f, cfg).empty());
    }
    SECTION("declaring only the supertype is not enough") {
        Facts f = facts_of({
            "package p;\n"
            "class NullExc extends multex.Exc { }\n"
            "class S { void m() throws multex.Exc { throw new NullExc(); } }\n",
        }, cfg);
        CHECK(check_undeclared_exc_throws(f, cfg).size() == 1);
    }
    SECTION("failures are exempt") {
        Facts f = facts_of({
            "package p;\n"
            "class LoadFailure extends multex.Failure { }\n"
            "class S { void m() { throw new LoadFailure(); } }\n",
        }, cfg);
        CHECK(check_undeclared_exc_throws(f, cfg).empty());
    }
    SECTION("exceptions outside the convention hierarchy are exempt") {
        Facts f = facts_of({
            "package p;\n"
            "class S { void m() { throw new java.lang.RuntimeException(); } }\n",
        }, cfg);
        CHECK(check_undeclared_exc_throws(f, cfg).empty());
    }
    SECTION("a type under both hierarchies counts as a failure") {
        RuleConfig wide = cfg;
        wide.failure_base_types = {"p.MyFailure"};
        Facts f = facts_of({
            "package p;\n"
            "class MyFailure extends multex.Exc { }\n"
            "class LoadFailure extends MyFailure { }\n"
            "class S { void m() { throw new LoadFailure(); } }\n",
        }, wide);
        // LoadFailure reaches multex.Exc, but the failure exemption wins
        CHECK(check_undeclared_exc_throws(f, wide).empty());
    }
}

TEST_CASE("MSG01 and MSG02 compare throw-site arity with the template") {
    RuleConfig cfg;
    std::string corpus =
        "package fb6.files.lg;\n"
        "/** User {0} does not have the right to access file {1}. */\n"
        "class FileAccessRightExc extends multex.Exc { }\n"
        "/** Failure loading object of class {0} with id {1}. */\n"
        "class LoadObjectFailure extends multex.Failure { }\n"
        "class FileService {\n"
        "    void ok(final String u, final String f) throws FileAccessRightExc {\n"
        "        throwNew(FileAccessRightExc.class, u, f);\n"
        "    }\n"
        "    void tooFew(final String u) throws FileAccessRightExc {\n"
        "        throwNew(FileAccessRightExc.class, u);\n"
        "    }\n"
        "    void tooMany(final String u, final String f) throws FileAccessRightExc {\n"
        "        throwNew(FileAccessRightExc.class, u, f, u);\n"
        "    }\n"
        "    void failureOk(final Exception ex, final String c, final String id) {\n"
        "        throwNew(LoadObjectFailure.class, ex, c, id);\n"
        "    }\n"
        "    void failureShort(final Exception ex, final String c) {\n"
        "        throwNew(LoadObjectFailure.class, ex, c);\n"
        "    }\n"
        "}\n";
    Facts f = facts_of({corpus}, cfg);
    std::vector<Finding> findings = check_message_param_arity(f, cfg);
    REQUIRE(rule_ids(findings) == std::vector<std::string>{"MSG01", "MSG02", "MSG01"});

    CHECK(findings[0].location.line == 11);
    CHECK(findings[0].severity == Severity::Error);
    CHECK(findings[0].params ==
          std::vector<std::string>{"1", "fb6.files.lg.FileAccessRightExc", "2"});
    CHECK(findings[0].message ==
          "Throw site passes 1 message parameters but template of "
          "fb6.files.lg.FileAccessRightExc requires 2");

    CHECK(findings[1].location.line == 14);
    CHECK(findings[1].severity == Severity::Warning);
    CHECK(findings[1].message ==
          "Throw site passes 3 message parameters but template of "
          "fb6.files.lg.FileAccessRightExc requires only 2");

    // the failure's first argument is the cause, not a message parameter
    CHECK(findings[2].location.line == 20);
    CHECK(findings[2].params ==
          std::vector<std::string>{"1", "fb6.files.lg.LoadObjectFailure", "2"});
}

TEST_CASE("arity checks skip types without templates or outside the hierarchy") {
    RuleConfig cfg;
    Facts f = facts_of({
        "package p;\n"
        "class BareExc extends multex.Exc { }\n"
        "/** Outside {0}. */\n"
        "class Foreign { }\n"
        "class S {\n"
        "    void a() throws BareExc { throw new BareExc(\"x\", \"y\"); }\n"
        "    void b(final Foreign f) { throw new Foreign(); }\n"
        "}\n",
    }, cfg);
    CHECK(check_message_param_arity(f, cfg).empty());
}

TEST_CASE("a zero-argument failure throw satisfies a parameterless template") {
    RuleConfig cfg;
    Facts f = facts_of({
        "package p;\n"
        "/** Plain breakage. */\n"
        "class BrokeFailure extends multex.Failure { }\n"
        "class S { void m() { throw new BrokeFailure(); } }\n",
    }, cfg);
    // 0 args minus the cause slot clamps to 0 effective = 0 required
    CHECK(check_message_param_arity(f, cfg).empty());
}

TEST_CASE("run_all merges, sorts, and counts deterministically") {
    RuleConfig cfg;
    std::vector<CompilationUnit> units;
    units.push_back(parse_unit(
        "package fb6.user.lg;\n"
        "class B {\n"
        "    private String f;\n"
        "    void z(final fb6.user.lg.Person p) { this.f = \"x\"; p.setName(\"x\"); }\n"
        "}\n",
        "b.minij"));
    units.push_back(parse_unit(
        "package fb6.user.lg;\n"
        "class Person { void setName(final String n) {} }\n",
        "a.minij"));
    Facts f = extract_facts(units, cfg);
    Report first = run_all(f, cfg);
    Report second = run_all(f, cfg);
    REQUIRE(first.findings.size() == 2);
    CHECK(first.error_count == 2);
    CHECK(first.warning_count == 0);
    // sorted by file name first, both findings live in b.minij line 4
    CHECK(first.findings[0].location.file == "b.minij");
    CHECK(first.findings[0].rule_id == "MUT02");
    CHECK(first.findings[1].rule_id == "MUT01");
    CHECK(first.findings[0].location.column < first.findings[1].location.column);
    REQUIRE(second.findings.size() == first.findings.size());
    for (std::size_t i = 0; i < first.findings.size(); ++i) {
        CHECK(format_finding_line(first.findings[i]) == format_finding_line(second.findings[i]));
    }
}

TEST_CASE("severity overrides re-grade or drop findings") {
    std::string corpus =
        "package fb6.x.lg;\n"
        "/** Needs {0}. */\n"
        "class NeedsExc extends multex.Exc { }\n"
        "class S {\n"
        "    void m() throws NeedsExc { throw new NeedsExc(\"a\", \"b\"); }\n"
        "}\n";
    RuleConfig cfg;
    Facts f = facts_of({corpus}, cfg);
    Report plain = run_all(f, cfg);
    REQUIRE(plain.findings.size() == 1);
    CHECK(plain.findings[0].rule_id == "MSG02");
    CHECK(plain.warning_count == 1);

    RuleConfig as_error = cfg;
    as_error.severities["MSG02"] = SeveritySetting::Error;
    Report upgraded = run_all(f, as_error);
    REQUIRE(upgraded.findings.size() == 1);
    CHECK(upgraded.findings[0].severity == Severity::Error);
    CHECK(upgraded.error_count == 1);

    RuleConfig off = cfg;
    off.severities["MSG02"] = SeveritySetting::Off;
    Report silenced = run_all(f, off);
    CHECK(silenced.findings.empty());
}

TEST_CASE("unknown severity keys are rejected") {
    RuleConfig cfg;
    cfg.severities["NOPE"] = SeveritySetting::Off;
    Facts f = facts_of({"package p; class A {}"}, cfg);
    try {
        run_all(f, cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "severities");
    }
}

TEST_CASE("the rule table lists every rule with its default severity") {
    const std::vector<RuleInfo>& rules = builtin_rules();
    REQUIRE(rules.size() == 9);
    int warnings = 0;
    for (const RuleInfo& r : rules) {
        CHECK_FALSE(builtin_catalog().entries.find(r.id) == builtin_catalog().entries.end());
        if (r.default_severity == Severity::Warning) ++warnings;
    }
    CHECK(warnings == 1); // MSG02 only
}
