#!/usr/bin/env python3
"""Writes data/sample.dic, the small open sample dictionary.

Each category lists its patterns; a pattern listed under several categories
becomes one entry carrying all of their ids.
"""
import pathlib

CATEGORIES = [
    (1, "Pronoun", "i me my mine myself we us our ours ourselves you your yours yourself he him his she her hers they them their theirs it its"),
    (2, "I", "i me my mine myself i'm i've i'll i'd"),
    (3, "We", "we us our ours ourselves we're we've we'll let's"),
    (4, "You", "you your yours yourself you're you've you'll y'all"),
    (5, "Other", "he him his she her hers they them their theirs himself herself themselves"),
    (6, "Negate", "no not never nothing nobody none nor don't can't won't didn't isn't wasn't aren't couldn't shouldn't wouldn't without neither"),
    (7, "Assent", "yes yeah yep ok okay agree absolutely sure"),
    (8, "Article", "a an the"),
    (9, "Preps", "to with in on at of for from into onto over under about above below after before between through along across toward"),
    (10, "Number", "one two three four five six seven eight nine ten hundred thousand first second third half"),
    (12, "PosEmo", "love* lovely happy happi* glad good great nice fun beauti* wonderful awesome amazing enjoy* excit* laugh* smil* sweet thank* grateful proud hope* joy* best cheer* delight*"),
    (13, "Optimism", "hope* best proud confident* optimis* bright* win* success* better"),
    (16, "NegEmo", "hate* sad* angry anger* awful terribl* worr* fear* afraid hurt* cry* cried lonel* upset annoy* mad bad worst stress* nervous* disappoint* miser* pain*"),
    (17, "Anx", "worr* fear* afraid nervous* anxi* stress* scared panic* tense uneasy"),
    (18, "Anger", "hate* angry anger* mad annoy* furious* rage* kill* fight* jerk stupid"),
    (19, "Sad", "sad* cry* cried lonel* miss* grief griev* tears depress* hopeless heartbr* unhapp*"),
    (20, "CogMech", "think* thought know* because reason* understand* mean* maybe perhaps should would could realiz* consider* cause*"),
    (21, "Cause", "because reason* cause* effect* hence therefore since why"),
    (22, "Insight", "think* thought know* understand* realiz* consider* learn* idea* believ* feel* wonder*"),
    (23, "Discrep", "should would could need* want* wish* hope* ought must"),
    (24, "Tentat", "maybe perhaps guess* seem* probabl* possibl* somewhat sometime* almost"),
    (25, "Certain", "always never definite* certain* absolute* sure clear* truly total*"),
    (31, "Social", "talk* friend* party partie* people everyone everybody meet* met visit* call* share* hug* together team* buddy"),
    (32, "Family", "mom dad mother* father* brother* sister* family famil* son daughter* wife husband cousin* aunt* uncle* grandma* grandpa* baby"),
    (33, "Friends", "friend* buddy pal* roommate* neighbor* bestie"),
    (34, "Humans", "people person* child* kid* boy* girl* man men woman women human* guy*"),
    (41, "Past", "was were had did went got been ago yesterday used lost made saw said came"),
    (42, "Present", "is are am be do does go get today now have has being"),
    (43, "Future", "will shall gonna going tomorrow soon next later plan*"),
    (51, "Work", "work* job* office* boss* meeting* project* class* school* study* exam* homework deadline* career*"),
    (52, "Achieve", "achiev* accomplish* goal* win* success* finish* complet* effort* earn* master* improv*"),
    (53, "Leisure", "game* movie* music* play* beach* vacation* travel* party partie* tv dinner* weekend* fun sport* football* basketball*"),
    (54, "Home", "home* house* kitchen* bed* room* garden* apartment* dinner*"),
    (55, "Money", "money cash* pay* paid buy* bought price* cost* bank* dollar*"),
    (56, "Relig", "god* pray* church* bless* faith* heaven* soul* holy"),
    (57, "Death", "dead death* die* died dying funeral* grave* kill*"),
    (58, "Swear", "damn* hell crap* shit* fuck* suck*"),
    (121, "Inclusive", "with and us along include* both together we"),
    (122, "Exclusive", "but without except* exclu* either or rather unless"),
]

def main():
    entries = {}
    order = []
    for cid, _name, words in CATEGORIES:
        for w in words.split():
            if w not in entries:
                entries[w] = []
                order.append(w)
            if cid not in entries[w]:
                entries[w].append(cid)
    lines = ["# Sample LIWC-shaped dictionary for tests and demos.",
             "# Generated by scripts/build_sample_lexicon.py.", "%"]
    lines += [f"{cid}\t{name}" for cid, name, _ in CATEGORIES]
    lines.append("%")
    for w in sorted(order):
        lines.append(w + "\t" + "\t".join(str(c) for c in sorted(entries[w])))
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "sample.dic"
    out.write_text("\n".join(lines) + "\n")
    print(f"{len(CATEGORIES)} categories, {len(order)} entries -> {out}")

if __name__ == "__main__":
    main()
