"""End-to-end engine behavior: ingestion, scoring, contests, plans, replay."""

import pytest

from conftest import (
    alice_commit,
    baseline_doc,
    bob_commit,
    bundle_doc,
    iso,
    project_doc,
    ts,
    violation,
)
from debtforge.engine import Engine
from debtforge.errors import (
    AlreadySettled,
    ContestAlreadyOpen,
    ContestClosed,
    ContestNotOpen,
    DanglingParent,
    DuplicateConflict,
    EmptyObjectives,
    InvalidWindow,
    NonParticipant,
    NotAManager,
    NoSnapshot,
    PendingLimitExceeded,
    SchemaMismatch,
    UnknownCommit,
    UnknownContest,
    UnknownDeveloper,
    UnknownProject,
    WindowNotEnded,
    WindowOutsideContest,
)
from debtforge.store import MemoryEventStore


def open_default_contest(engine, project_id="c-app"):
    return engine.open_contest(project_id, ts(0), ts(24 * 21))


def ingest_listing_pair(engine, project_id="c-app"):
    engine.declare_baseline(project_id, baseline_doc("base"))
    engine.submit_bundle(project_id, bob_commit())
    engine.submit_bundle(project_id, alice_commit())


class TestProjects:
    def test_unknown_project_errors(self, engine):
        with pytest.raises(UnknownProject):
            engine.submit_bundle("ghost", bob_commit())

    def test_recreate_identical_is_idempotent(self, engine):
        doc = project_doc()
        first = engine.create_project(doc)
        second = engine.create_project(doc)
        assert first == second

    def test_recreate_different_conflicts(self, engine):
        engine.create_project(project_doc())
        with pytest.raises(DuplicateConflict):
            engine.create_project(project_doc(name="other"))

    def test_bad_project_id_rejected(self, engine):
        with pytest.raises(SchemaMismatch):
            engine.create_project(project_doc(project_id="../evil"))


class TestIngestion:
    def test_listing_pair_yields_signed_actions(self, project):
        open_default_contest(project)
        ingest_listing_pair(project)
        actions = project.list_actions("c-app")
        assert len(actions) == 2
        negative, positive = actions
        assert negative["sign"] == "negative"
        assert negative["author_id"] == "bob"
        assert negative["rule_id"] == "no-unreachable"
        assert positive["sign"] == "positive"
        assert positive["author_id"] == "alice"

    def test_resend_identical_bundle_is_noop(self, project):
        ingest_listing_pair(project)
        digest_before = project.state_digest("c-app")
        receipt = project.submit_bundle("c-app", bob_commit())
        assert receipt["status"] == "applied"
        assert project.state_digest("c-app") == digest_before

    def test_same_commit_different_content_conflicts(self, project):
        ingest_listing_pair(project)
        altered = bob_commit()
        altered["snapshot"]["violations"] = []
        with pytest.raises(DuplicateConflict):
            project.submit_bundle("c-app", altered)

    def test_strict_ingest_rejects_dangling_parent(self, project):
        with pytest.raises(DanglingParent):
            project.ingest_bundle("c-app", bob_commit(parent="never-sent"))

    def test_buffered_ingest_parks_until_parent_arrives(self, project):
        receipt = project.submit_bundle("c-app", alice_commit(parent="c-bob"))
        assert receipt["status"] == "pending"
        assert receipt["missing_parents"] == ["c-bob"]
        assert project.pending_report("c-app") == [
            {"commit_id": "c-alice", "missing_parents": ["c-bob"]}
        ]
        project.declare_baseline("c-app", baseline_doc("base"))
        project.submit_bundle("c-app", bob_commit())
        # the parked child applied automatically, parents first
        assert project.pending_report("c-app") == []
        actions = project.list_actions("c-app")
        assert [a["author_id"] for a in actions] == ["bob", "alice"]

    def test_pending_limit_enforced(self, engine):
        engine.create_project(project_doc(options={"pending_limit": 1}))
        engine.submit_bundle("c-app", alice_commit(parent="nowhere"))
        stray = bundle_doc(
            "c-x", ["nowhere-else"], "Bob <bob@example.com>", iso(3), [], []
        )
        with pytest.raises(PendingLimitExceeded):
            engine.submit_bundle("c-app", stray)

    def test_schema_version_checked(self, project):
        doc = bob_commit()
        doc["schema_version"] = 2
        with pytest.raises(SchemaMismatch):
            project.submit_bundle("c-app", doc)

    def test_malformed_bundle_rejected(self, project):
        doc = bob_commit()
        del doc["meta"]["author"]
        with pytest.raises(SchemaMismatch):
            project.submit_bundle("c-app", doc)

    def test_bundle_invariant_meta_snapshot_agree(self):
        from debtforge.ingestion import CommitBundle
        from debtforge.model import CommitMeta, Snapshot

        meta = CommitMeta("c1", (), "a", ts(0), ())
        snapshot = Snapshot("c2", (), ts(0))
        with pytest.raises(ValueError):
            CommitBundle(meta=meta, snapshot=snapshot)


class TestBaselines:
    def test_heavy_baseline_emits_no_actions(self, project):
        # the scale a mature codebase arrives with: pre-existing debt is never blamed
        violations = [
            violation("no-unreachable", f"src/f{i % 700}.js", 1 + i // 700, f"stale_{i}();")
            for i in range(15_000)
        ]
        project.declare_baseline("c-app", baseline_doc("base", violations))
        assert project.list_actions("c-app") == []
        assert len(project.outstanding_violations("c-app")) == 15_000

    def test_child_of_baseline_earns_positive_action(self, project):
        open_default_contest(project)
        vio = violation("no-unreachable", "src/f.js", 3, "dead();")
        project.declare_baseline("c-app", baseline_doc("base", [vio]))
        fix = bundle_doc(
            "c-fix",
            ["base"],
            "Alice <alice@example.com>",
            iso(1),
            [{"path": "src/f.js", "kind": "modified"}],
            [],
        )
        project.submit_bundle("c-app", fix)
        (action,) = project.list_actions("c-app")
        assert action["sign"] == "positive"
        assert action["author_id"] == "alice"

    def test_baseline_redeclare_identical_is_noop(self, project):
        project.declare_baseline("c-app", baseline_doc("base"))
        before = project.state_digest("c-app")
        receipt = project.declare_baseline("c-app", baseline_doc("base"))
        assert receipt["status"] == "baseline"
        assert project.state_digest("c-app") == before

    def test_rebaseline_requires_known_commit(self, project):
        with pytest.raises(UnknownCommit):
            project.rebaseline("c-app", baseline_doc("ghost"))

    def test_rebaseline_emits_no_actions_and_children_diff_against_it(self, project):
        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        # analyzer upgrade reveals a violation that nobody gets blamed for
        vio = violation("log.md", "src/log.js", 2, "console.log(secret);")
        project.rebaseline("c-app", baseline_doc("base", [vio]))
        assert project.list_actions("c-app") == []
        fix = bundle_doc(
            "c-fix",
            ["base"],
            "Alice <alice@example.com>",
            iso(2),
            [{"path": "src/log.js", "kind": "modified"}],
            [],
        )
        project.submit_bundle("c-app", fix)
        (action,) = project.list_actions("c-app")
        assert action["sign"] == "positive"
        assert action["rule_id"] == "log.md"

    def test_idempotent_resubmission_of_whole_sequence(self, project):
        open_default_contest(project)
        ingest_listing_pair(project)
        digest = project.state_digest("c-app")
        ingest_listing_pair(project)
        assert project.state_digest("c-app") == digest


class TestScoresAndLeaderboard:
    def test_worked_example_scores_and_ranking(self, project):
        open_default_contest(project)
        ingest_listing_pair(project)
        board = project.leaderboard("c-app", "contest-1")
        rows = board["rows"]
        assert [(r["rank"], r["developer_id"], r["score"]) for r in rows] == [
            (1, "alice", 1),
            (2, "bob", -1),
        ]

    def test_points_frozen_at_config_active_at_commit_time(self, project):
        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        project.submit_bundle("c-app", bob_commit())  # authored at ts(1), scores -1
        project.put_scoring_config(
            "c-app",
            {"default_positive": 10, "default_negative": -10},
            now=ts(1.5),
        )
        project.submit_bundle("c-app", alice_commit())  # authored at ts(2), scores +10
        actions = {a["author_id"]: a["points"] for a in project.list_actions("c-app")}
        assert actions == {"bob": -1, "alice": 10}

    def test_late_bundle_scores_under_the_config_of_its_time(self, project):
        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        project.put_scoring_config(
            "c-app", {"default_positive": 7, "default_negative": -7}, now=ts(10)
        )
        # bob's commit authored at ts(1) arrives after the config change
        project.submit_bundle("c-app", bob_commit())
        (action,) = project.list_actions("c-app")
        assert action["points"] == -1

    def test_manager_commits_never_score(self, project):
        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        smelly = bundle_doc(
            "c-mgr",
            ["base"],
            "Mallory <mallory@example.com>",
            iso(1),
            [{"path": "src/m.js", "kind": "added"}],
            [violation("no-unreachable", "src/m.js", 1, "oops();")],
        )
        project.submit_bundle("c-app", smelly)
        assert len(project.list_actions("c-app")) == 1  # recorded for audit
        rows = project.leaderboard("c-app", "contest-1")["rows"]
        assert all(r["developer_id"] != "mallory" for r in rows)
        assert all(r["score"] == 0 for r in rows)
        with pytest.raises(NonParticipant):
            project.developer_score("c-app", "contest-1", "mallory")

    def test_actions_between_contests_score_nothing(self, project):
        project.declare_baseline("c-app", baseline_doc("base"))
        project.submit_bundle("c-app", bob_commit())  # no contest open at ts(1)
        contest = project.open_contest("c-app", ts(5), ts(24 * 21))
        rows = project.leaderboard("c-app", contest["contest_id"])["rows"]
        assert all(r["score"] == 0 for r in rows)

    def test_unknown_developer_score_errors(self, project):
        open_default_contest(project)
        with pytest.raises(UnknownDeveloper):
            project.developer_score("c-app", "contest-1", "ghost")

    def test_disabling_a_rule_zeroes_open_contest_scores(self, project):
        open_default_contest(project)
        ingest_listing_pair(project)
        assert project.developer_score("c-app", "contest-1", "bob") == -1
        project.put_scoring_config(
            "c-app",
            {
                "default_positive": 1,
                "default_negative": -1,
                "disabled_rules": ["no-unreachable"],
            },
            now=ts(3),
        )
        assert project.developer_score("c-app", "contest-1", "bob") == 0
        assert project.developer_score("c-app", "contest-1", "alice") == 0


class TestContestLifecycle:
    def test_single_open_contest(self, project):
        open_default_contest(project)
        with pytest.raises(ContestAlreadyOpen):
            project.open_contest("c-app", ts(24 * 30), ts(24 * 40))

    def test_invalid_window(self, project):
        with pytest.raises(InvalidWindow):
            project.open_contest("c-app", ts(1), ts(1))

    def test_windows_may_not_overlap_but_gaps_allowed(self, project):
        project.open_contest("c-app", ts(0), ts(24))
        project.close_contest("c-app", "contest-1", now=ts(24))
        with pytest.raises(InvalidWindow):
            project.open_contest("c-app", ts(12), ts(48))
        project.open_contest("c-app", ts(48), ts(72))  # gap is fine

    def test_fresh_contest_resets_scores(self, project):
        project.open_contest("c-app", ts(0), ts(24))
        ingest_listing_pair(project)
        project.close_contest("c-app", "contest-1", now=ts(24))
        second = project.open_contest("c-app", ts(48), ts(72))
        rows = project.leaderboard("c-app", second["contest_id"])["rows"]
        assert all(r["score"] == 0 for r in rows)

    def test_close_freezes_leaderboard_and_rejects_mutation(self, project):
        open_default_contest(project)
        ingest_listing_pair(project)
        result = project.close_contest("c-app", "contest-1", now=ts(24 * 21))
        assert [r["developer_id"] for r in result["leaderboard"]] == ["alice", "bob"]
        with pytest.raises(ContestNotOpen):
            project.close_contest("c-app", "contest-1", now=ts(24 * 21))
        with pytest.raises(ContestClosed):
            project.apply_adjustment(
                "c-app", "mallory", "bob", 5, contest_id="contest-1"
            )

    def test_repeated_leaderboard_reads_identical_after_close(self, project):
        open_default_contest(project)
        ingest_listing_pair(project)
        project.close_contest("c-app", "contest-1", now=ts(24 * 21))
        import json

        first = json.dumps(project.leaderboard("c-app", "contest-1"), sort_keys=True)
        second = json.dumps(project.leaderboard("c-app", "contest-1"), sort_keys=True)
        assert first == second

    def test_late_action_into_closed_contest_is_flagged_zero_effect(self, project):
        project.open_contest("c-app", ts(0), ts(24))
        project.declare_baseline("c-app", baseline_doc("base"))
        project.close_contest("c-app", "contest-1", now=ts(30))
        project.submit_bundle("c-app", bob_commit())  # authored ts(1), inside closed window
        rows = project.leaderboard("c-app", "contest-1")["rows"]
        assert all(r["score"] == 0 for r in rows)
        overview = project.manager_overview("c-app", "mallory", "contest-1")
        assert len(overview["flagged_actions"]) == 1
        assert overview["flagged_actions"][0]["contest_id"] == "contest-1"

    def test_unknown_contest(self, project):
        with pytest.raises(UnknownContest):
            project.leaderboard("c-app", "nope")


class TestPlans:
    def plan_doc(self, **overrides):
        doc = {
            "assignees": ["alice", "bob"],
            "objectives": [
                {"kind": "fewer_than", "sign_filter": "negative", "threshold": 5},
                {
                    "kind": "at_least",
                    "sign_filter": "positive",
                    "threshold": 1,
                    "rule_filter": "no-unreachable",
                },
            ],
            "bonus": 3,
            "penalty": -3,
            "starts_at": iso(0),
            "ends_at": iso(48),
        }
        doc.update(overrides)
        return doc

    def test_only_managers_create_plans(self, project):
        open_default_contest(project)
        with pytest.raises(NotAManager):
            project.create_plan("c-app", "alice", self.plan_doc())

    def test_window_must_fit_contest(self, project):
        project.open_contest("c-app", ts(0), ts(24))
        with pytest.raises(WindowOutsideContest):
            project.create_plan("c-app", "mallory", self.plan_doc(ends_at=iso(100)))

    def test_objectives_required(self, project):
        open_default_contest(project)
        with pytest.raises(EmptyObjectives):
            project.create_plan("c-app", "mallory", self.plan_doc(objectives=[]))

    def test_phrasing_stored_canonically(self, project):
        open_default_contest(project)
        plan = project.create_plan("c-app", "mallory", self.plan_doc())
        assert plan["objectives"][0] == {
            "kind": "at_most",
            "sign_filter": "negative",
            "threshold": 4,
            "rule_filter": None,
        }

    def test_success_pays_bonus_to_every_assignee(self, project):
        open_default_contest(project)
        plan = project.create_plan("c-app", "mallory", self.plan_doc())
        ingest_listing_pair(project)  # alice's fix satisfies the at_least objective
        project.settle_plan("c-app", plan["plan_id"], now=ts(49))
        assert project.developer_score("c-app", "contest-1", "alice") == 1 + 3
        assert project.developer_score("c-app", "contest-1", "bob") == -1 + 3

    def test_failure_debits_penalty_from_every_assignee(self, project):
        open_default_contest(project)
        plan = project.create_plan("c-app", "mallory", self.plan_doc())
        project.settle_plan("c-app", plan["plan_id"], now=ts(49))  # nothing happened
        assert project.developer_score("c-app", "contest-1", "alice") == -3
        assert project.developer_score("c-app", "contest-1", "bob") == -3
        assert project.get_plan("c-app", plan["plan_id"])["state"] == "failed"

    def test_settle_twice_rejected(self, project):
        open_default_contest(project)
        plan = project.create_plan("c-app", "mallory", self.plan_doc())
        project.settle_plan("c-app", plan["plan_id"], now=ts(49))
        with pytest.raises(AlreadySettled):
            project.settle_plan("c-app", plan["plan_id"], now=ts(50))

    def test_settlement_waits_for_window_end(self, project):
        open_default_contest(project)
        plan = project.create_plan("c-app", "mallory", self.plan_doc())
        with pytest.raises(WindowNotEnded):
            project.settle_plan("c-app", plan["plan_id"], now=ts(1))

    def test_contest_close_settles_active_plans_first(self, project):
        open_default_contest(project)
        plan = project.create_plan("c-app", "mallory", self.plan_doc())
        ingest_listing_pair(project)
        result = project.close_contest("c-app", "contest-1", now=ts(24 * 21))
        settled = {p["plan_id"]: p["state"] for p in result["plans"]}
        assert settled[plan["plan_id"]] == "succeeded"
        by_dev = {r["developer_id"]: r["score"] for r in result["leaderboard"]}
        assert by_dev == {"alice": 4, "bob": 2}

    def test_objective_progress_counts_group_aggregate(self, project):
        open_default_contest(project)
        plan = project.create_plan("c-app", "mallory", self.plan_doc())
        ingest_listing_pair(project)
        count, satisfied = project.objective_progress("c-app", plan["plan_id"], 1)
        assert (count, satisfied) == (1, True)
        # bob's negative action counts against the at_most objective
        count, satisfied = project.objective_progress("c-app", plan["plan_id"], 0)
        assert (count, satisfied) == (1, True)


class TestAdjustments:
    def test_manager_can_undo_intentional_debt(self, project):
        open_default_contest(project)
        ingest_listing_pair(project)
        project.apply_adjustment("c-app", "mallory", "bob", 1, reason="intentional debt")
        assert project.developer_score("c-app", "contest-1", "bob") == 0

    def test_non_manager_rejected(self, project):
        open_default_contest(project)
        with pytest.raises(NotAManager):
            project.apply_adjustment("c-app", "alice", "bob", 5)

    def test_requires_open_contest(self, project):
        with pytest.raises(ContestClosed):
            project.apply_adjustment("c-app", "mallory", "bob", 5)

    def test_adjustment_visible_in_dashboard(self, project):
        open_default_contest(project)
        project.apply_adjustment("c-app", "mallory", "bob", 2, reason="cleanup credit")
        dashboard = project.dashboard("c-app", "bob")
        assert dashboard["adjustments"][0]["delta"] == 2
        assert dashboard["adjustments"][0]["reason"] == "cleanup credit"


class TestUnmappedAuthors:
    def test_unmapped_author_parks_commit_without_actions(self, project):
        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        stranger = bundle_doc(
            "c-stranger",
            ["base"],
            "Drive-by <nobody@example.com>",
            iso(1),
            [{"path": "src/x.js", "kind": "added"}],
            [violation("no-unreachable", "src/x.js", 1, "dead();")],
        )
        receipt = project.submit_bundle("c-app", stranger)
        assert receipt["author_unmapped"] is True
        assert project.list_actions("c-app") == []
        overview = project.manager_overview("c-app", "mallory")
        assert overview["quarantined_authors"] == {
            "Drive-by <nobody@example.com>": ["c-stranger"]
        }

    def test_mapping_the_author_releases_parked_actions(self, project):
        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        stranger = bundle_doc(
            "c-stranger",
            ["base"],
            "Drive-by <nobody@example.com>",
            iso(1),
            [{"path": "src/x.js", "kind": "added"}],
            [violation("no-unreachable", "src/x.js", 1, "dead();")],
        )
        project.submit_bundle("c-app", stranger)
        project.register_developer(
            "c-app",
            {
                "developer_id": "dave",
                "vcs_identities": ["Drive-by <nobody@example.com>"],
                "role": "developer",
            },
        )
        (action,) = project.list_actions("c-app")
        assert action["author_id"] == "dave"
        assert project.developer_score("c-app", "contest-1", "dave") == -1
        overview = project.manager_overview("c-app", "mallory")
        assert overview["quarantined_authors"] == {}


class TestMergePolicy:
    def two_branch_history(self, engine):
        engine.declare_baseline("c-app", baseline_doc("base"))
        left = bundle_doc(
            "c-left",
            ["base"],
            "Alice <alice@example.com>",
            iso(1),
            [{"path": "l.js", "kind": "added"}],
            [violation("no-unreachable", "l.js", 1, "left();")],
        )
        right = bundle_doc(
            "c-right",
            ["base"],
            "Bob <bob@example.com>",
            iso(2),
            [{"path": "r.js", "kind": "added"}],
            [],
        )
        merge = bundle_doc(
            "c-merge",
            ["c-left", "c-right"],
            "Bob <bob@example.com>",
            iso(3),
            [{"path": "l.js", "kind": "modified"}],
            [violation("no-unreachable", "l.js", 1, "left();")],
        )
        engine.submit_bundle("c-app", left)
        engine.submit_bundle("c-app", right)
        engine.submit_bundle("c-app", merge)

    def test_merges_skipped_by_default(self, project):
        open_default_contest(project)
        self.two_branch_history(project)
        authors = [a["author_id"] for a in project.list_actions("c-app")]
        assert authors == ["alice"]  # only the branch commit scored

    def test_diff_first_parent_policy(self, engine):
        engine.create_project(project_doc(options={"merge_policy": "diff_first_parent"}))
        open_default_contest(engine)
        self.two_branch_history(engine)
        # merge diffs against c-left: violation unchanged there, no extra actions
        authors = [a["author_id"] for a in engine.list_actions("c-app")]
        assert authors == ["alice"]


class TestSuggestionViews:
    def seed_outstanding(self, engine):
        engine.declare_baseline("c-app", baseline_doc("base"))
        work = bundle_doc(
            "c-work",
            ["base"],
            "Bob <bob@example.com>",
            iso(1),
            [
                {"path": "src/a.js", "kind": "added"},
                {"path": "src/b.js", "kind": "added"},
            ],
            [
                violation("no-unreachable", "src/a.js", 1, "dead1();"),
                violation("no-unreachable", "src/a.js", 9, "dead2();"),
                violation("log.md", "src/b.js", 2, "console.log(1);"),
            ],
        )
        engine.submit_bundle("c-app", work)

    def test_no_snapshot_errors(self, project):
        with pytest.raises(NoSnapshot):
            project.treemap("c-app")
        with pytest.raises(NoSnapshot):
            project.rule_reward_ranking("c-app")

    def test_ranking_and_treemap_agree(self, project):
        open_default_contest(project)
        self.seed_outstanding(project)
        ranking = project.rule_reward_ranking("c-app")
        total = sum(r["total_potential"] for r in ranking)
        tree = project.treemap("c-app")
        assert tree["root"]["weight"] == total
        assert tree["head_commit_id"] == "c-work"

    def test_personalized_follows_recent_files(self, project):
        open_default_contest(project)
        self.seed_outstanding(project)
        picks = project.personalized_suggestions("c-app", "bob")
        assert {p["file_path"] for p in picks} == {"src/a.js", "src/b.js"}
        picks_alice = project.personalized_suggestions("c-app", "alice")
        assert picks_alice == []

    def test_fix_earns_exactly_the_displayed_potential(self, project):
        open_default_contest(project)
        self.seed_outstanding(project)
        target = project.personalized_suggestions("c-app", "bob")[0]
        fix = bundle_doc(
            "c-fixit",
            ["c-work"],
            "Bob <bob@example.com>",
            iso(2),
            [{"path": target["file_path"], "kind": "modified"}],
            [
                # keep everything except the fixed one
                violation("no-unreachable", "src/a.js", 9, "dead2();"),
            ]
            if target["file_path"] == "src/a.js"
            else [],
        )
        before = {a["action_id"] for a in project.list_actions("c-app")}
        project.submit_bundle("c-app", fix)
        new = [a for a in project.list_actions("c-app") if a["action_id"] not in before]
        positive = [a for a in new if a["sign"] == "positive"]
        assert positive and positive[0]["points"] == target["potential_points"]


class TestViews:
    def test_feed_empty_project(self, project):
        feed = project.newsfeed("c-app", "alice")
        assert feed["entries"] == []
        assert feed["total_entries"] == 0

    def test_feed_pagination_is_stable(self, project):
        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        parent = "base"
        for i in range(7):
            commit_id = f"c-{i}"
            project.submit_bundle(
                "c-app",
                bundle_doc(
                    commit_id,
                    [parent],
                    "Bob <bob@example.com>",
                    iso(1 + i),
                    [{"path": f"f{i}.js", "kind": "added"}],
                    [violation("no-unreachable", f"f{i}.js", 1, f"x{i};")],
                ),
            )
            parent = commit_id
        page1 = project.newsfeed("c-app", "bob", page=1, page_size=3)
        page2 = project.newsfeed("c-app", "bob", page=2, page_size=3)
        page3 = project.newsfeed("c-app", "bob", page=3, page_size=3)
        ids = [e["action_id"] for p in (page1, page2, page3) for e in p["entries"]]
        assert len(ids) == 7 and len(set(ids)) == 7
        assert page1["total_entries"] == 7
        # newest first
        assert page1["entries"][0]["created_at"] > page1["entries"][1]["created_at"]

    def test_overview_orders_rules_by_violation_count(self, project):
        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        vios = [violation("no-unreachable", "a.js", 1 + i, f"v{i};") for i in range(5)]
        vios += [violation("log.md", "a.js", 10 + i, f"w{i};") for i in range(2)]
        project.submit_bundle(
            "c-app",
            bundle_doc(
                "c-mess",
                ["base"],
                "Bob <bob@example.com>",
                iso(1),
                [{"path": "a.js", "kind": "added"}],
                vios,
            ),
        )
        overview = project.manager_overview("c-app", "mallory")
        assert [rc["rule_id"] for rc in overview["rule_counts"]] == [
            "no-unreachable",
            "log.md",
        ]
        assert overview["rule_counts"][0]["negative_actions"] == 5
        assert overview["totals"]["negative_actions"] == 7
        assert overview["developer_scores"][0]["developer_id"] in ("alice", "bob")

    def test_closed_overview_is_stable_between_reads(self, project):
        open_default_contest(project)
        ingest_listing_pair(project)
        project.close_contest("c-app", "contest-1", now=ts(24 * 21))
        import json

        first = json.dumps(
            project.manager_overview("c-app", "mallory", "contest-1"), sort_keys=True
        )
        second = json.dumps(
            project.manager_overview("c-app", "mallory", "contest-1"), sort_keys=True
        )
        assert first == second


class TestConcurrency:
    def test_parallel_submitters_cannot_corrupt_state(self, project):
        import threading

        open_default_contest(project)
        project.declare_baseline("c-app", baseline_doc("base"))
        bundles = []
        for i in range(24):
            bundles.append(
                bundle_doc(
                    f"c-{i}",
                    [f"c-{i - 1}"] if i else ["base"],
                    "Bob <bob@example.com>" if i % 2 else "Alice <alice@example.com>",
                    iso(1 + i),
                    [{"path": f"f{i}.js", "kind": "added"}],
                    [violation("no-unreachable", f"f{i}.js", 1, f"x{i};")],
                )
            )
        # submit out of order from several threads; buffering must untangle it
        import random as _random

        _random.Random(3).shuffle(bundles)
        errors = []

        def worker(chunk):
            try:
                for doc in chunk:
                    project.submit_bundle("c-app", doc)
            except Exception as exc:  # pragma: no cover - failure reporting
                errors.append(exc)

        threads = [
            threading.Thread(target=worker, args=(bundles[i::4],)) for i in range(4)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert project.pending_report("c-app") == []
        actions = project.list_actions("c-app")
        assert len(actions) == 24
        scores = {
            dev: project.developer_score("c-app", "contest-1", dev)
            for dev in ("alice", "bob")
        }
        assert scores == {"alice": -12, "bob": -12}


class TestReplay:
    def test_replay_reconstructs_live_state(self, tmp_path):
        store = MemoryEventStore()
        engine = Engine(store)
        engine.create_project(project_doc())
        open_default_contest(engine)
        ingest_listing_pair(engine)
        engine.apply_adjustment("c-app", "mallory", "bob", 1, reason="undo")
        engine.close_contest("c-app", "contest-1", now=ts(24 * 21))
        live = engine.state_digest("c-app")

        rebuilt = Engine(store)
        assert rebuilt.state_digest("c-app") == live
        assert rebuilt.leaderboard("c-app", "contest-1") == engine.leaderboard(
            "c-app", "contest-1"
        )
